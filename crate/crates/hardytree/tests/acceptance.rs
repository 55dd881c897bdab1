//! End-to-end acceptance: runs every suite criterion at full size and
//! prints one pass/fail line per criterion.

use hardytree::suite;

#[test]
fn acceptance_criteria() {
    let results = suite::run_all(false);
    for r in &results {
        println!("{}", r.line());
    }
    assert_eq!(results.len(), 12, "all twelve criteria must report");
    let failed: Vec<String> = results.iter().filter(|r| !r.pass).map(|r| r.line()).collect();
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.join("\n"));
}
