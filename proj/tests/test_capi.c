/* Exercises the C interface from C. */
#include <stdio.h>
#include <string.h>

#include "ergolab/ergolab.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

int main(void) {
  ergo_settings* s = NULL;
  ergo_report* r = NULL;
  ergo_expr* e = NULL;
  ergo_sequence* q = NULL;
  ergo_model* m = NULL;
  ergo_vector* v = NULL;
  char buf[64];
  size_t need = 0;
  double re = 0, im = 0, M = 0;
  int64_t argmax = 0;

  EXPECT(strlen(ergo_version()) > 0);
  EXPECT(ergo_settings_new(&s) == ERGO_OK);
  EXPECT(ergo_settings_set_n(s, 20000) == ERGO_OK);
  EXPECT(ergo_settings_set_jobs(s, 0) == ERGO_INVALID_ARGUMENT);
  EXPECT(strlen(ergo_last_error()) > 0);

  EXPECT(ergo_classify(s, "t^(3/2)*ln(t)", &r) == ERGO_OK);
  EXPECT(strstr(ergo_report_json(r), "\"verdict\": \"Pm(2)\"") != NULL);
  ergo_report_free(r);

  EXPECT(ergo_classify(s, "t^^2", &r) == ERGO_PARSE_ERROR);
  EXPECT(r == NULL);
  EXPECT(strstr(ergo_last_error(), "position") != NULL);

  EXPECT(ergo_qtest(s, "t*ln(t)", 2, 2, &r) == ERGO_OK);
  EXPECT(strstr(ergo_report_json(r), "\"Q-fails\"") != NULL);
  EXPECT(ergo_report_file_count(r) == 1);
  EXPECT(strcmp(ergo_report_file_name(r, 0), "witness_trace.csv") == 0);
  ergo_report_free(r);

  EXPECT(ergo_qtest(s, "t*ln(t)", 6, 6, &r) == ERGO_GUARD_EXCEEDED);

  EXPECT(ergo_average(s, "{\"f\": \"t^(3/2)\", \"expected\": \"diverges\"}", &r) == ERGO_OK);
  EXPECT(ergo_report_failed(r) == 1);
  ergo_report_free(r);
  EXPECT(ergo_average(s, "{\"f\": ", &r) == ERGO_PARSE_ERROR);
  EXPECT(ergo_average(s, "{\"model\": \"diagu:1/2\", \"vector\": \"e:4\"}", &r) == ERGO_INVALID_ARGUMENT);

  EXPECT(ergo_expr_parse("t^(3/2)", &e) == ERGO_OK);
  EXPECT(ergo_expr_print(e, buf, sizeof buf, &need) == ERGO_OK);
  EXPECT(need == strlen(buf));
  EXPECT(ergo_sequence_generate(e, "zero", 10, 1, &q) == ERGO_OK);
  EXPECT(ergo_sequence_length(q) == 10);
  EXPECT(ergo_sequence_data(q)[3] == 8); /* [4^(3/2)] */
  ergo_sequence_free(q);
  ergo_expr_free(e);

  EXPECT(ergo_model_parse("simshift:1,2", &m) == ERGO_OK);
  EXPECT(ergo_vector_parse("e:0", &v) == ERGO_OK);
  EXPECT(ergo_model_gram(m, v, 1, 1, &re, &im) == ERGO_OK);
  EXPECT(re == 4.0 && im == 0.0);
  EXPECT(ergo_model_power_bound(m, 100, &M, &argmax) == ERGO_OK);
  EXPECT(M == 2.0 && argmax == 1);
  ergo_vector_free(v);
  ergo_model_free(m);
  EXPECT(ergo_model_parse("diag:2", &m) != ERGO_OK);

  EXPECT(ergo_classify(NULL, NULL, &r) == ERGO_INVALID_ARGUMENT);
  ergo_settings_free(s);
  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  else printf("capi: all checks passed\n");
  return failures ? 1 : 0;
}
