/* C interface to the pegsol peg solitaire search engine. */

#ifndef PEGSOL_H
#define PEGSOL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call. The numbering matches the command-line exit codes for
 * the first four values.
 */
typedef enum PegsolStatus {
  PEGSOL_STATUS_OK = 0,
  /**
   * Proven to have no solution within the stated bound.
   */
  PEGSOL_STATUS_INFEASIBLE = 1,
  /**
   * Unknown board, bad coordinate, illegal move and the like.
   */
  PEGSOL_STATUS_INVALID_INPUT = 2,
  /**
   * A node or time budget ran out first.
   */
  PEGSOL_STATUS_BUDGET_EXCEEDED = 3,
  /**
   * A required pointer argument was null.
   */
  PEGSOL_STATUS_NULL_POINTER = 4,
  /**
   * An unexpected failure inside the engine.
   */
  PEGSOL_STATUS_INTERNAL = 5,
} PegsolStatus;

/**
 * A board together with the jump variant in play.
 */
typedef struct PegsolBoard PegsolBoard;

/**
 * A solution found by one of the solve calls.
 */
typedef struct PegsolSolution PegsolSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a board handle. `name` is `english-33`, `french-37` or
 * `diamond-N`; `variant` is `4`, `6`, `6-nesw` or `8`.
 *
 * # Safety
 * `name` and `variant` are nul-terminated strings; `out` is writable.
 */
enum PegsolStatus pegsol_board_new(const char *name, const char *variant, struct PegsolBoard **out);

/**
 * Releases a board handle; null is ignored.
 *
 * # Safety
 * `board` is null or a handle from [`pegsol_board_new`] not yet freed.
 */
void pegsol_board_free(struct PegsolBoard *board);

/**
 * Number of holes on the board, or 0 for a null handle.
 *
 * # Safety
 * `board` is null or a live board handle.
 */
size_t pegsol_board_hole_count(const struct PegsolBoard *board);

/**
 * Finds a shortest solution from a single vacancy to a single peg.
 * `max_moves`, `max_nodes` and `max_seconds` of zero mean no limit.
 *
 * # Safety
 * `board` is a live handle; `vacancy` is a nul-terminated string; `target`
 * is null or nul-terminated; `out` is writable.
 */
enum PegsolStatus pegsol_solve_shortest(const struct PegsolBoard *board,
                                        const char *vacancy,
                                        const char *target,
                                        uint32_t max_moves,
                                        uint64_t max_nodes,
                                        double max_seconds,
                                        struct PegsolSolution **out);

/**
 * Finds some solution quickly by composing reference plays (eight-move
 * play only).
 *
 * # Safety
 * As for [`pegsol_solve_shortest`].
 */
enum PegsolStatus pegsol_solve_any(const struct PegsolBoard *board,
                                   const char *vacancy,
                                   const char *target,
                                   struct PegsolSolution **out);

/**
 * Number of moves, or 0 for a null handle.
 *
 * # Safety
 * `solution` is null or a live solution handle.
 */
uint32_t pegsol_solution_length(const struct PegsolSolution *solution);

/**
 * Nodes expanded by the search that produced the solution (0 for composed
 * solutions or a null handle).
 *
 * # Safety
 * `solution` is null or a live solution handle.
 */
uint64_t pegsol_solution_nodes(const struct PegsolSolution *solution);

/**
 * The solution in move notation, e.g. `d2-d4, f3-d3`. Release the result
 * with [`pegsol_string_free`]. Returns null for a null handle.
 *
 * # Safety
 * `solution` is null or a live solution handle.
 */
char *pegsol_solution_text(const struct PegsolSolution *solution);

/**
 * Releases a solution handle; null is ignored.
 *
 * # Safety
 * `solution` is null or a handle not yet freed.
 */
void pegsol_solution_free(struct PegsolSolution *solution);

/**
 * Replays `solution_text` from `start` (a hole with `'` for a single
 * vacancy, `C9`, `full`, or a position grid). On success writes the move
 * count and the number of pegs left; either output may be null.
 *
 * # Safety
 * `board` is a live handle; the strings are nul-terminated; the outputs are
 * null or writable.
 */
enum PegsolStatus pegsol_verify(const struct PegsolBoard *board,
                                const char *start,
                                const char *solution_text,
                                uint32_t *out_moves,
                                uint32_t *out_pegs);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call on the same thread.
 */
const char *pegsol_last_error(void);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` is null or a string from this library not yet freed.
 */
void pegsol_string_free(char *s);

/**
 * Library version as a static string.
 */
const char *pegsol_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PEGSOL_H */
