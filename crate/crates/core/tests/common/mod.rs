//! Helpers shared by the integration tests: random generators, explicit
//! reference semantics, and symbolic-to-explicit conversions.
#![allow(dead_code)]

pub mod arena;
pub mod cli;
pub mod gen;
pub mod oracle;

use std::collections::BTreeSet;
use std::path::PathBuf;

use sociable::kernel::Bdd;
use sociable::model::{Interface, Space, VarId};
use sociable::Library;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn corpus_file(name: &str) -> PathBuf {
    corpus_dir().join(name)
}

pub fn load(files: &[&str]) -> Library {
    let paths: Vec<PathBuf> = files.iter().map(|f| corpus_file(f)).collect();
    Library::from_files(&paths).expect("corpus parses")
}

pub fn interface(files: &[&str], name: &str) -> Interface {
    load(files)
        .interface(name)
        .expect("corpus module validates")
}

/// Groups of corpus files whose modules can be used together.
pub const GROUPS: [&[&str]; 3] = [
    &["fire.si", "fire_variants.si"],
    &["fire_strict.si"],
    &["channel.si"],
];

/// Invariants tried on each corpus interface that tracks their variables.
pub const INVARIANTS: [&str; 11] = [
    "true",
    "false",
    "!alarm",
    "!seen",
    "s = 0",
    "msg != 2",
    "!ack",
    "count < 2",
    "last != 2",
    "!pending | msg != 0",
    "!armed",
];

/// Every validated corpus interface, grouped as in [`GROUPS`].
pub fn corpus_groups() -> Vec<Vec<Interface>> {
    GROUPS
        .iter()
        .map(|files| {
            let lib = load(files);
            lib.modules
                .iter()
                .map(|m| lib.interface(&m.name.text).unwrap())
                .collect()
        })
        .collect()
}

/// Valuations of a predicate over unprimed `ids`.
pub fn states(space: &mut Space, f: Bdd, ids: &[VarId]) -> BTreeSet<Vec<i64>> {
    let slots: Vec<(VarId, bool)> = ids.iter().map(|&id| (id, false)).collect();
    space.valuations(f, &slots).into_iter().collect()
}

/// Valuations of a relation as `(source, target)` pairs over `ids`.
pub fn pairs(space: &mut Space, f: Bdd, ids: &[VarId]) -> BTreeSet<(Vec<i64>, Vec<i64>)> {
    let mut slots: Vec<(VarId, bool)> = ids.iter().map(|&id| (id, false)).collect();
    slots.extend(ids.iter().map(|&id| (id, true)));
    space
        .valuations(f, &slots)
        .into_iter()
        .map(|v| {
            let (s, t) = v.split_at(ids.len());
            (s.to_vec(), t.to_vec())
        })
        .collect()
}
