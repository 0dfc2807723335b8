namespace rikit::cli { int placeholder() { return 0; } }
