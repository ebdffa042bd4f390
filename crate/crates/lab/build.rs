use std::collections::BTreeSet;
use std::fs;

fn main() {
    println!("cargo:rerun-if-changed=invariants.manifest");
    println!("cargo:rerun-if-changed=src/verify/mod.rs");
    let manifest = fs::read_to_string("invariants.manifest").expect("read invariants.manifest");
    let listed: BTreeSet<String> = manifest
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split('\t').next().unwrap_or(l).to_string())
        .collect();
    let registry = fs::read_to_string("src/verify/mod.rs").expect("read src/verify/mod.rs");
    let registered: BTreeSet<String> =
        registry.split("id: \"").skip(1).filter_map(|rest| rest.split('"').next()).map(str::to_string).collect();
    let missing: Vec<_> = listed.difference(&registered).collect();
    let unlisted: Vec<_> = registered.difference(&listed).collect();
    if !missing.is_empty() || !unlisted.is_empty() {
        panic!("verify registry out of sync with invariants.manifest: missing checks {missing:?}, unlisted checks {unlisted:?}");
    }
}
