int dummy_test_spaces;
