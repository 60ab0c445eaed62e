//! One line per acceptance criterion; fails if any criterion fails or runs
//! past its time limit.

use inclex_core::suites;

#[test]
fn acceptance() {
    let verdicts = suites::run_all();
    println!();
    for v in &verdicts {
        println!("{}", v.line());
    }
    let failed: Vec<&str> = verdicts.iter().filter(|v| !v.ok()).map(|v| v.name).collect();
    println!("{} of {} criteria pass", verdicts.len() - failed.len(), verdicts.len());
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
