int dummy_test_operators;
