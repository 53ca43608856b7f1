#include <stdio.h>
#include <string.h>
#include "treetau.h"

int main(void) {
    uint32_t d[] = {3, 3, 3, 3};
    TreetauDegreeSequence *seq = NULL;
    if (treetau_degseq_new(d, 4, &seq) != TREETAU_STATUS_OK) return 1;

    TreetauGraph *g = NULL;
    if (treetau_graph_sample(seq, 7, &g) != TREETAU_STATUS_OK) return 2;
    char buf[32];
    size_t needed = 0;
    if (treetau_graph_spanning_tree_count(g, buf, sizeof buf, &needed) != TREETAU_STATUS_OK) return 3;
    if (strcmp(buf, "16") != 0 || needed != 3) return 4;

    TreetauEstimate est;
    if (treetau_estimate(seq, true, &est) != TREETAU_STATUS_PRECONDITION) return 5;
    if (treetau_last_error() == NULL) return 6;

    uint32_t bad[] = {3, 1};
    TreetauDegreeSequence *other = NULL;
    if (treetau_degseq_new(bad, 2, &other) != TREETAU_STATUS_OK) return 7;
    bool graphical = true;
    treetau_degseq_is_graphical(other, &graphical);
    if (graphical) return 8;

    treetau_graph_free(g);
    treetau_degseq_free(seq);
    treetau_degseq_free(other);
    printf("ok %s\n", treetau_version());
    return 0;
}
