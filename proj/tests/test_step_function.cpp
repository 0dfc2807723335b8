int dummy_test_step_function;
