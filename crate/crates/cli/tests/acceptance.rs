use std::time::{Duration, Instant};

use algforge::suite::{self, KNOWN_UNATTAINABLE};
use algforge::report::Status;

#[test]
fn acceptance_suite() {
    let start = Instant::now();
    let report = suite::verify(0);
    let elapsed = start.elapsed();
    for c in &report.checks {
        println!("{} {}: {}", c.status.label(), c.name, c.detail.as_deref().unwrap_or(""));
    }
    println!("elapsed {:.2?}", elapsed);
    assert_eq!(report.checks.len(), 19);
    for (i, c) in report.checks.iter().enumerate() {
        let id = u8::try_from(i + 1).unwrap();
        if KNOWN_UNATTAINABLE.contains(&id) {
            assert_eq!(c.status, Status::Fail, "{} was expected to fail as stated", c.name);
        } else {
            assert_eq!(c.status, Status::Pass, "{}: {:?}", c.name, c.detail);
        }
    }
    assert!(elapsed < Duration::from_secs(60), "suite took {elapsed:?}");
}

#[test]
fn suite_is_deterministic() {
    let a = suite::verify(0).to_json();
    let b = suite::verify(0).to_json();
    assert_eq!(a, b);
}
