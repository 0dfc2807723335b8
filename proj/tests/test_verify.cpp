int dummy_test_verify;
