int dummy_test_optimal;
