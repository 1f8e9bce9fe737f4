/* Exercises the shared library through its C header only. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "periods/periods.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

static void test_status_mapping(void) {
  EXPECT(strcmp(pp_status_name(PP_OK), "ok") == 0);
  EXPECT(pp_exit_code(PP_OK) == 0);
  EXPECT(pp_exit_code(PP_IO) == 1);
  EXPECT(pp_exit_code(PP_INTERNAL) == 1);
  EXPECT(pp_exit_code(PP_INVALID_CONFIG) == 2);
  EXPECT(pp_exit_code(PP_INVALID_INPUT) == 2);
  EXPECT(pp_exit_code(PP_EMPTY_CLASS) == 2);
  EXPECT(pp_exit_code(PP_NUMERIC) == 3);
  EXPECT(pp_exit_code(PP_SUITE_FAILURE) == 3);
  EXPECT(pp_exit_code(PP_RESOURCE_LIMIT) == 4);
  EXPECT(pp_exit_code(PP_DEGENERATE) == 5);
  EXPECT(strlen(pp_version()) > 0);
}

static void test_config(void) {
  pp_config* a = NULL;
  pp_config* b = NULL;
  const char* ha = NULL;
  const char* hb = NULL;
  char saved[65];
  EXPECT(pp_config_default(&a) == PP_OK);
  EXPECT(pp_config_default(&b) == PP_OK);
  EXPECT(pp_config_set(b, "run", "workers", "4") == PP_OK);
  EXPECT(pp_config_hash(a, &ha) == PP_OK);
  strncpy(saved, ha, 64);
  saved[64] = '\0';
  EXPECT(pp_config_hash(b, &hb) == PP_OK);
  EXPECT(strcmp(saved, hb) == 0);
  EXPECT(pp_config_set(b, "run", "nope", "1") == PP_INVALID_CONFIG);
  EXPECT(strstr(pp_last_error(), "nope") != NULL);
  EXPECT(pp_config_load("/nonexistent/periods.ini", &b) == PP_IO);
  EXPECT(pp_run(a, "frobnicate") == PP_INVALID_CONFIG);
  pp_config_free(a);
  pp_config_free(b);
}

static void test_dataset(void) {
  pp_rep* rep = NULL;
  pp_rep* sym = NULL;
  pp_dataset* data = NULL;
  double period = 0.0;
  const char* word = NULL;
  EXPECT(pp_rep_schottky_sl2(1.0, 0.5, &rep) == PP_INVALID_CONFIG);
  EXPECT(pp_rep_schottky_sl2(4.0, 0.78539816339744831, &rep) == PP_OK);
  EXPECT(pp_rep_dim(rep) == 2);
  EXPECT(pp_rep_sym_power(rep, 2, &sym) == PP_OK);
  EXPECT(pp_rep_dim(sym) == 3);
  EXPECT(pp_collect(rep, 1, "all", 1, &data) == PP_OK);
  EXPECT(pp_dataset_size(data) == 4);
  EXPECT(pp_dataset_period(data, 0, 0, &period) == PP_OK);
  EXPECT(fabs(period - 2.0 * log(4.0)) < 1e-12);
  EXPECT(pp_dataset_word(data, 1, &word) == PP_OK);
  EXPECT(strcmp(word, "A") == 0);
  EXPECT(pp_dataset_period(data, 4, 0, &period) == PP_INVALID_INPUT);
  EXPECT(pp_dataset_period(data, 0, 2, &period) == PP_INVALID_INPUT);
  pp_dataset_free(data);
  EXPECT(pp_collect(rep, 2, "sometimes", 1, &data) == PP_INVALID_CONFIG);
  pp_rep_free(sym);
  pp_rep_free(rep);
}

static void test_gaussian(void) {
  double mass = 0.0;
  EXPECT(pp_gaussian_cdf_interval(-1.96, 1.96, &mass) == PP_OK);
  EXPECT(fabs(mass - 0.9500042097) < 1e-9);
  EXPECT(pp_gaussian_cdf_interval(-INFINITY, INFINITY, &mass) == PP_OK);
  EXPECT(fabs(mass - 1.0) < 1e-15);
}

int main(void) {
  test_status_mapping();
  test_config();
  test_dataset();
  test_gaussian();
  if (failures) {
    fprintf(stderr, "%d C API expectation(s) failed\n", failures);
    return 1;
  }
  printf("C API checks passed\n");
  return 0;
}
