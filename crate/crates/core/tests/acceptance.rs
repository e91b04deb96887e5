use pfstab::repro::{self, ReproCheck};
use std::path::PathBuf;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../codes")
}

#[test]
fn acceptance_criteria() {
    let dir = corpus_dir();
    let checks: Vec<ReproCheck> = vec![
        repro::criterion_1(),
        repro::criterion_2(),
        repro::criterion_3(),
        repro::criterion_4(),
        repro::criterion_5(Some(&dir)),
        repro::criterion_6(),
        repro::criterion_7(),
        repro::criterion_8(),
        repro::criterion_9(),
        repro::criterion_10(),
    ];
    for c in &checks {
        println!("{}", c.line());
    }
    let failed: Vec<u32> = checks.iter().filter(|c| !c.passed).map(|c| c.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
