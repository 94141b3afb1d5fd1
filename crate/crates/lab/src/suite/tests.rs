use super::*;
use crate::config::Partial;

fn full() -> RunConfig {
    Partial::default().resolve()
}

#[test]
fn full_run_passes() {
    let records = run(&full());
    let bad: Vec<String> = records
        .iter()
        .filter(|r| r.status != Status::Pass)
        .map(|r| format!("{} {} [{}] {:?} {:?}", r.id, r.check, r.config, r.residual_witness, r.detail))
        .collect();
    assert!(bad.is_empty(), "{} of {} failed:\n{}", bad.len(), records.len(), bad.join("\n"));
}
