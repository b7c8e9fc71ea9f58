use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use pegsol_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = pegsol_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn board(name: &str, variant: &str) -> *mut PegsolBoard {
    let mut b = ptr::null_mut();
    let st = unsafe { pegsol_board_new(c(name).as_ptr(), c(variant).as_ptr(), &mut b) };
    assert_eq!(st, PegsolStatus::Ok);
    b
}

#[test]
fn shortest_solution_round_trips_through_verify() {
    let b = board("diamond-4", "8");
    assert_eq!(unsafe { pegsol_board_hole_count(b) }, 25);
    let mut sol = ptr::null_mut();
    let st = unsafe { pegsol_solve_shortest(b, c("d4").as_ptr(), c("d4").as_ptr(), 0, 0, 0.0, &mut sol) };
    assert_eq!(st, PegsolStatus::Ok);
    assert_eq!(unsafe { pegsol_solution_length(sol) }, 10);
    assert!(unsafe { pegsol_solution_nodes(sol) } > 0);
    let text = unsafe { pegsol_solution_text(sol) };
    let (mut moves, mut pegs) = (0, 0);
    let st = unsafe { pegsol_verify(b, c("d4'").as_ptr(), text, &mut moves, &mut pegs) };
    assert_eq!(st, PegsolStatus::Ok);
    assert_eq!((moves, pegs), (10, 1));
    unsafe {
        pegsol_string_free(text);
        pegsol_solution_free(sol);
        pegsol_board_free(b);
    }
}

#[test]
fn composed_solution_on_the_english_board() {
    let b = board("english-33", "8");
    let mut sol = ptr::null_mut();
    let st = unsafe { pegsol_solve_any(b, c("a3").as_ptr(), c("g5").as_ptr(), &mut sol) };
    assert_eq!(st, PegsolStatus::Ok);
    let text = unsafe { pegsol_solution_text(sol) };
    let mut pegs = 0;
    let st = unsafe { pegsol_verify(b, c("a3'").as_ptr(), text, ptr::null_mut(), &mut pegs) };
    assert_eq!(st, PegsolStatus::Ok);
    assert_eq!(pegs, 1);
    unsafe {
        pegsol_string_free(text);
        pegsol_solution_free(sol);
        pegsol_board_free(b);
    }
}

#[test]
fn error_codes_match_the_failure() {
    let mut b = ptr::null_mut();
    let st = unsafe { pegsol_board_new(c("hexagon").as_ptr(), c("8").as_ptr(), &mut b) };
    assert_eq!(st, PegsolStatus::InvalidInput);
    assert!(last_error().contains("hexagon"));
    let st = unsafe { pegsol_board_new(ptr::null(), c("8").as_ptr(), &mut b) };
    assert_eq!(st, PegsolStatus::NullPointer);

    let d3 = board("diamond-3", "8");
    let mut sol = ptr::null_mut();
    let st = unsafe { pegsol_solve_shortest(d3, c("c2").as_ptr(), c("a3").as_ptr(), 0, 0, 0.0, &mut sol) };
    assert_eq!(st, PegsolStatus::Infeasible);
    assert!(sol.is_null());
    let st = unsafe { pegsol_solve_shortest(d3, c("z9").as_ptr(), ptr::null(), 0, 0, 0.0, &mut sol) };
    assert_eq!(st, PegsolStatus::InvalidInput);

    let e = board("english-33", "8");
    let st = unsafe { pegsol_solve_shortest(e, c("d4").as_ptr(), c("d4").as_ptr(), 0, 1000, 0.0, &mut sol) };
    assert_eq!(st, PegsolStatus::BudgetExceeded);
    let st = unsafe { pegsol_verify(e, c("d4'").as_ptr(), c("d2-d4, d2-d4").as_ptr(), ptr::null_mut(), ptr::null_mut()) };
    assert_eq!(st, PegsolStatus::InvalidInput);
    assert!(last_error().contains("move 2"));
    unsafe {
        pegsol_board_free(d3);
        pegsol_board_free(e);
        pegsol_board_free(ptr::null_mut());
        pegsol_solution_free(ptr::null_mut());
        pegsol_string_free(ptr::null_mut());
    }
    assert_eq!(unsafe { pegsol_solution_length(ptr::null()) }, 0);
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/pegsol.h")).unwrap();
    for name in [
        "pegsol_board_new",
        "pegsol_board_free",
        "pegsol_board_hole_count",
        "pegsol_solve_shortest",
        "pegsol_solve_any",
        "pegsol_solution_length",
        "pegsol_solution_nodes",
        "pegsol_solution_text",
        "pegsol_solution_free",
        "pegsol_verify",
        "pegsol_last_error",
        "pegsol_string_free",
        "pegsol_version",
        "PEGSOL_STATUS_BUDGET_EXCEEDED = 3",
    ] {
        assert!(header.contains(name), "{name} missing from the header");
    }
    let v = unsafe { CStr::from_ptr(pegsol_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

/// Compiles the C example against the static library when a C compiler and
/// the archive are present.
#[test]
fn c_program_links_and_runs() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf();
    let archive = profile_dir.join("libpegsol_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !archive.exists() || Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipped: no C compiler or static library at {}", archive.display());
        return;
    }
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("pegsol_smoke");
    let status = Command::new(&cc)
        .arg(dir.join("examples/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&archive)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let run = Command::new(&out).output().unwrap();
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(run.status.success(), "{stdout}");
    assert!(stdout.contains("length=10 verified_moves=10 pegs=1"), "{stdout}");
    assert!(stdout.contains("bad_board=2"), "{stdout}");
}
