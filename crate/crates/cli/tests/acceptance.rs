//! One line per acceptance criterion. A criterion may only fail when the
//! suite attaches an explanation: the stated theorem disagrees with the
//! computation and the corrected statement was checked in its place.
//!
//! Runs without the libtest harness so the lines are never captured.

use eichler_cli::suite::{run, SuiteConfig};

fn main() {
    let cfg = SuiteConfig::new(101, 3);
    let lines = run(&cfg, |l| println!("{l}"));
    assert_eq!(lines.len(), 10);
    let unexplained: Vec<_> = lines.iter().filter(|l| !l.pass && l.explained.is_none()).collect();
    assert!(unexplained.is_empty(), "{unexplained:#?}");
    println!("acceptance: {} of 10 pass, no unexplained failures", lines.iter().filter(|l| l.pass).count());
}
