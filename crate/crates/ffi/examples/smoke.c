/* Solves and verifies a small game through the C interface. */
#include <stdio.h>

#include "pegsol.h"

int main(void) {
    PegsolBoard *board = NULL;
    if (pegsol_board_new("diamond-4", "8", &board) != PEGSOL_STATUS_OK) {
        fprintf(stderr, "board: %s\n", pegsol_last_error());
        return 1;
    }
    PegsolSolution *sol = NULL;
    PegsolStatus st = pegsol_solve_shortest(board, "d4", "d4", 0, 0, 0.0, &sol);
    if (st != PEGSOL_STATUS_OK) {
        fprintf(stderr, "solve: %s\n", pegsol_last_error());
        return 1;
    }
    char *text = pegsol_solution_text(sol);
    uint32_t moves = 0, pegs = 0;
    st = pegsol_verify(board, "d4'", text, &moves, &pegs);
    printf("length=%u verified_moves=%u pegs=%u\n", pegsol_solution_length(sol), moves, pegs);

    PegsolBoard *bad = NULL;
    PegsolStatus bad_st = pegsol_board_new("hexagon", "8", &bad);
    printf("bad_board=%d error=%s\n", (int)bad_st, pegsol_last_error());

    pegsol_string_free(text);
    pegsol_solution_free(sol);
    pegsol_board_free(board);
    return st == PEGSOL_STATUS_OK && moves == 10 && pegs == 1 ? 0 : 1;
}
