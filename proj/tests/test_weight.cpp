int dummy_test_weight;
