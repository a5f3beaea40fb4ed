#include <stdio.h>
#include <string.h>

#include "ptlab.h"

#define CHECK(cond)                                         \
    do {                                                    \
        if (!(cond)) {                                      \
            fprintf(stderr, "failed: %s (%s)\n", #cond,     \
                    ptlab_last_error_message());            \
            return 1;                                       \
        }                                                   \
    } while (0)

int main(void) {
    PtlabCode *code = NULL;
    CHECK(ptlab_code_parse("7 4\n1000110\n0100101\n0010011\n0001111\n", &code) == PTLAB_STATUS_OK);
    size_t gamma = 0;
    CHECK(ptlab_code_dual_distance(code, &gamma) == PTLAB_STATUS_OK);
    CHECK(gamma == 4);

    PtlabWordSet *cp = NULL;
    CHECK(ptlab_wordset_parse("0000000\n", 7, &cp) == PTLAB_STATUS_OK);
    PtlabTester *t = NULL;
    CHECK(ptlab_tester_parse("adaptive 7 2 1 1/8\n1\n1 2 * * 2 * *\n1000\n", &t) == PTLAB_STATUS_OK);

    char *report = NULL;
    bool pass = false;
    CHECK(ptlab_certify_adaptive(code, cp, t, "1/8", &report, &pass) == PTLAB_STATUS_OK);
    CHECK(pass);
    CHECK(strstr(report, "BOUND 1.75 ACTUAL 0 PASS") != NULL);
    ptlab_string_free(report);

    PtlabCode *bad = NULL;
    CHECK(ptlab_code_parse("7 1\n101\n", &bad) == PTLAB_STATUS_PARSE);
    CHECK(bad == NULL);

    ptlab_tester_free(t);
    ptlab_wordset_free(cp);
    ptlab_code_free(code);
    printf("ok\n");
    return 0;
}
