//! C ABI for the pegsol search engine.
//!
//! Boards and solutions are opaque handles created and released through this
//! interface. Every fallible call returns a [`PegsolStatus`]; on failure the
//! message is available from [`pegsol_last_error`] on the same thread.
//! Strings returned to the caller are owned by it and released with
//! [`pegsol_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pegsol::search::{Budget, SolutionMode};
use pegsol::solver::{solve_any, solve_shortest_svss, verify_text, ShortestOptions, SvssProblem};
use pegsol::{Error, Geometry, Solution, Variant};

/// Outcome of a call. The numbering matches the command-line exit codes for
/// the first four values.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PegsolStatus {
    Ok = 0,
    /// Proven to have no solution within the stated bound.
    Infeasible = 1,
    /// Unknown board, bad coordinate, illegal move and the like.
    InvalidInput = 2,
    /// A node or time budget ran out first.
    BudgetExceeded = 3,
    /// A required pointer argument was null.
    NullPointer = 4,
    /// An unexpected failure inside the engine.
    Internal = 5,
}

/// A board together with the jump variant in play.
pub struct PegsolBoard {
    geometry: &'static Geometry,
    variant: Variant,
}

/// A solution found by one of the solve calls.
pub struct PegsolSolution {
    solution: Solution,
    length: u32,
    nodes: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> PegsolStatus {
    match err {
        Error::Infeasible(_) => PegsolStatus::Infeasible,
        Error::BudgetExceeded { .. } => PegsolStatus::BudgetExceeded,
        Error::Io(_) => PegsolStatus::Internal,
        _ => PegsolStatus::InvalidInput,
    }
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), PegsolStatus>) -> PegsolStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PegsolStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            PegsolStatus::Internal
        }
    }
}

fn fail(err: Error) -> PegsolStatus {
    set_error(&err.to_string());
    status_of(&err)
}

/// Borrows a C string argument.
///
/// # Safety
/// `p` is null or points to a nul-terminated string.
unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, PegsolStatus> {
    if p.is_null() {
        set_error(&format!("{what} is null"));
        return Err(PegsolStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(&format!("{what} is not UTF-8"));
        PegsolStatus::InvalidInput
    })
}

fn check_out<T>(out: *mut T) -> Result<(), PegsolStatus> {
    if out.is_null() {
        set_error("output pointer is null");
        return Err(PegsolStatus::NullPointer);
    }
    Ok(())
}

/// # Safety
/// `board` is null or a live handle from [`pegsol_board_new`].
unsafe fn board_ref<'a>(board: *const PegsolBoard) -> Result<&'a PegsolBoard, PegsolStatus> {
    board.as_ref().ok_or_else(|| {
        set_error("board handle is null");
        PegsolStatus::NullPointer
    })
}

/// Creates a board handle. `name` is `english-33`, `french-37` or
/// `diamond-N`; `variant` is `4`, `6`, `6-nesw` or `8`.
///
/// # Safety
/// `name` and `variant` are nul-terminated strings; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn pegsol_board_new(
    name: *const c_char,
    variant: *const c_char,
    out: *mut *mut PegsolBoard,
) -> PegsolStatus {
    guard(|| {
        check_out(out)?;
        let name = text(name, "board name")?;
        let variant = text(variant, "variant")?;
        let geometry = Geometry::named(name).map_err(fail)?;
        let variant = variant.parse().map_err(fail)?;
        *out = Box::into_raw(Box::new(PegsolBoard { geometry, variant }));
        Ok(())
    })
}

/// Releases a board handle; null is ignored.
///
/// # Safety
/// `board` is null or a handle from [`pegsol_board_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pegsol_board_free(board: *mut PegsolBoard) {
    if !board.is_null() {
        drop(Box::from_raw(board));
    }
}

/// Number of holes on the board, or 0 for a null handle.
///
/// # Safety
/// `board` is null or a live board handle.
#[no_mangle]
pub unsafe extern "C" fn pegsol_board_hole_count(board: *const PegsolBoard) -> usize {
    board.as_ref().map_or(0, |b| b.geometry.hole_count())
}

/// Parses the problem: `target` may be null (or `any`) for any finishing hole.
///
/// # Safety
/// The string arguments are null or nul-terminated.
unsafe fn problem(
    board: *const PegsolBoard,
    vacancy: *const c_char,
    target: *const c_char,
) -> Result<SvssProblem, PegsolStatus> {
    let b = board_ref(board)?;
    let geom = b.geometry;
    let vacancy = geom.parse_hole(text(vacancy, "vacancy")?).map_err(fail)?;
    let target = if target.is_null() {
        None
    } else {
        match text(target, "target")? {
            t if t.eq_ignore_ascii_case("any") => None,
            t => Some(geom.parse_hole(t).map_err(fail)?),
        }
    };
    Ok(SvssProblem::new(geom, b.variant, vacancy, target))
}

/// Finds a shortest solution from a single vacancy to a single peg.
/// `max_moves`, `max_nodes` and `max_seconds` of zero mean no limit.
///
/// # Safety
/// `board` is a live handle; `vacancy` is a nul-terminated string; `target`
/// is null or nul-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn pegsol_solve_shortest(
    board: *const PegsolBoard,
    vacancy: *const c_char,
    target: *const c_char,
    max_moves: u32,
    max_nodes: u64,
    max_seconds: f64,
    out: *mut *mut PegsolSolution,
) -> PegsolStatus {
    guard(|| {
        check_out(out)?;
        let p = problem(board, vacancy, target)?;
        let opts = ShortestOptions {
            max_moves: (max_moves > 0).then_some(max_moves),
            budget: Budget {
                max_nodes: (max_nodes > 0).then_some(max_nodes),
                max_seconds: (max_seconds > 0.0).then_some(max_seconds),
            },
            mode: SolutionMode::First,
            ..ShortestOptions::default()
        };
        let r = solve_shortest_svss(&p, &opts).map_err(fail)?;
        let solution = r.solutions.into_iter().next().ok_or_else(|| {
            set_error("search returned no solution");
            PegsolStatus::Internal
        })?;
        *out = Box::into_raw(Box::new(PegsolSolution {
            solution,
            length: r.length,
            nodes: r.search.nodes_total,
        }));
        Ok(())
    })
}

/// Finds some solution quickly by composing reference plays (eight-move
/// play only).
///
/// # Safety
/// As for [`pegsol_solve_shortest`].
#[no_mangle]
pub unsafe extern "C" fn pegsol_solve_any(
    board: *const PegsolBoard,
    vacancy: *const c_char,
    target: *const c_char,
    out: *mut *mut PegsolSolution,
) -> PegsolStatus {
    guard(|| {
        check_out(out)?;
        let p = problem(board, vacancy, target)?;
        let solution = solve_any(&p).map_err(fail)?;
        *out = Box::into_raw(Box::new(PegsolSolution {
            length: solution.len() as u32,
            solution,
            nodes: 0,
        }));
        Ok(())
    })
}

/// Number of moves, or 0 for a null handle.
///
/// # Safety
/// `solution` is null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn pegsol_solution_length(solution: *const PegsolSolution) -> u32 {
    solution.as_ref().map_or(0, |s| s.length)
}

/// Nodes expanded by the search that produced the solution (0 for composed
/// solutions or a null handle).
///
/// # Safety
/// `solution` is null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn pegsol_solution_nodes(solution: *const PegsolSolution) -> u64 {
    solution.as_ref().map_or(0, |s| s.nodes)
}

/// The solution in move notation, e.g. `d2-d4, f3-d3`. Release the result
/// with [`pegsol_string_free`]. Returns null for a null handle.
///
/// # Safety
/// `solution` is null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn pegsol_solution_text(solution: *const PegsolSolution) -> *mut c_char {
    match solution.as_ref() {
        Some(s) => CString::new(s.solution.to_text()).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}

/// Releases a solution handle; null is ignored.
///
/// # Safety
/// `solution` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pegsol_solution_free(solution: *mut PegsolSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Replays `solution_text` from `start` (a hole with `'` for a single
/// vacancy, `C9`, `full`, or a position grid). On success writes the move
/// count and the number of pegs left; either output may be null.
///
/// # Safety
/// `board` is a live handle; the strings are nul-terminated; the outputs are
/// null or writable.
#[no_mangle]
pub unsafe extern "C" fn pegsol_verify(
    board: *const PegsolBoard,
    start: *const c_char,
    solution_text: *const c_char,
    out_moves: *mut u32,
    out_pegs: *mut u32,
) -> PegsolStatus {
    guard(|| {
        let b = board_ref(board)?;
        let start = b.geometry.parse_position_spec(text(start, "start")?).map_err(fail)?;
        let report = verify_text(start, b.variant, text(solution_text, "solution")?).map_err(fail)?;
        if let Some(m) = out_moves.as_mut() {
            *m = report.moves as u32;
        }
        if let Some(p) = out_pegs.as_mut() {
            *p = report.final_position.pegs();
        }
        Ok(())
    })
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn pegsol_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` is null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pegsol_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn pegsol_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
