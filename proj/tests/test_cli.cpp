int dummy_test_cli;
