//! Separate binary: the environment is process-wide.

use noetherlab::cli::run;

fn call(args: &[&str]) -> String {
    let mut out = Vec::new();
    let mut err = Vec::new();
    run(std::iter::once("noetherlab").chain(args.iter().copied()), &mut out, &mut err);
    String::from_utf8(out).unwrap()
}

#[test]
fn seed_env_is_a_fallback() {
    // set before any run reads it; the flag still wins
    std::env::set_var("NOETHERLAB_SEED", "99");
    let out = call(&["oracle", "T1", "--entropy", "general", "--gamma", "symbolic", "--format", "json-lines", "--trials", "5"]);
    assert!(out.lines().all(|l| !l.contains("\"seed\"") || l.contains("\"seed\":99")), "{out}");
    assert!(out.contains("\"seed\":99"), "{out}");
    let out = call(&["oracle", "T1", "--entropy", "general", "--gamma", "symbolic", "--format", "json-lines", "--trials", "5", "--seed", "3"]);
    assert!(out.contains("\"seed\":3"));
    std::env::remove_var("NOETHERLAB_SEED");
}
