//! In-process runs of the command line and the golden cases that pin its
//! output.

use std::path::{Path, PathBuf};

use serde_json::Value;
use sociable::cli::{run, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE};
use sociable::compose::ComposeError;
use sociable::model::Space;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the CLI in-process from the crate root so paths in the output are
/// stable.
pub fn sociable(args: &[&str]) -> Run {
    assert_eq!(
        std::env::current_dir().unwrap(),
        Path::new(env!("CARGO_MANIFEST_DIR"))
    );
    let mut argv = vec!["sociable"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

/// Replaces the wall-clock figure, the only nondeterministic field.
pub fn mask_time(text: &str) -> String {
    text.lines()
        .map(|l| match l.find("\"time_ms\": ") {
            Some(i) => format!(
                "{}\"time_ms\": 0{}",
                &l[..i],
                if l.ends_with(',') { "," } else { "" }
            ),
            None => l.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn transcript(args: &[&str], r: &Run) -> String {
    format!(
        "$ sociable {}\nexit: {}\n--- stdout\n{}--- stderr\n{}",
        args.join(" "),
        r.code,
        mask_time(&r.stdout) + if r.stdout.is_empty() { "" } else { "\n" },
        r.stderr
    )
}

pub const CASES: &[(&str, &[&str])] = &[
    (
        "compose_fire",
        &["compose", "corpus/fire.si", "-m", "Fire", "-m", "Guard"],
    ),
    (
        "compose_fire_json",
        &[
            "--json",
            "compose",
            "corpus/fire.si",
            "-m",
            "Fire",
            "-m",
            "Guard",
        ],
    ),
    (
        "compose_strict",
        &[
            "compose",
            "corpus/fire_strict.si",
            "-m",
            "Fire",
            "-m",
            "Guard",
        ],
    ),
    (
        "compose_strict_json",
        &[
            "--json",
            "compose",
            "corpus/fire_strict.si",
            "-m",
            "Fire",
            "-m",
            "Guard",
        ],
    ),
    (
        "compose_burst",
        &[
            "compose",
            "corpus/channel.si",
            "-m",
            "Burst",
            "-m",
            "PickyReceiver",
        ],
    ),
    (
        "compose_sender",
        &[
            "compose",
            "corpus/channel.si",
            "-m",
            "Sender",
            "-m",
            "PickyReceiver",
        ],
    ),
    (
        "compose_logger",
        &[
            "compose",
            "corpus/channel.si",
            "-m",
            "Sender",
            "-m",
            "Logger",
        ],
    ),
    (
        "refine_reflexive",
        &["refine", "corpus/fire.si", "-m", "Fire", "-m", "Fire"],
    ),
    (
        "refine_resettable",
        &[
            "refine",
            "corpus/fire.si",
            "corpus/fire_variants.si",
            "-m",
            "ResettableFire",
            "-m",
            "Fire",
        ],
    ),
    (
        "refine_signature",
        &[
            "refine",
            "corpus/fire.si",
            "corpus/fire_variants.si",
            "-m",
            "Fire",
            "-m",
            "ResettableFire",
        ],
    ),
    (
        "refine_inputs",
        &[
            "refine",
            "corpus/fire.si",
            "corpus/fire_variants.si",
            "-m",
            "Guard",
            "-m",
            "LaxGuard",
        ],
    ),
    (
        "refine_outputs_json",
        &[
            "--json",
            "refine",
            "corpus/fire.si",
            "corpus/fire_variants.si",
            "-m",
            "NoisyFire",
            "-m",
            "Fire",
        ],
    ),
    (
        "check_optimistic",
        &[
            "check",
            "corpus/fire.si",
            "-m",
            "Guard",
            "--invariant",
            "!seen",
            "--mode",
            "optimistic",
        ],
    ),
    (
        "check_pessimistic",
        &[
            "check",
            "corpus/fire.si",
            "-m",
            "Guard",
            "--invariant",
            "!seen",
            "--mode",
            "pessimistic",
        ],
    ),
    (
        "check_fire_json",
        &[
            "--json",
            "check",
            "corpus/fire.si",
            "-m",
            "Fire",
            "--invariant",
            "!alarm",
            "--mode",
            "optimistic",
        ],
    ),
    (
        "check_true",
        &[
            "check",
            "corpus/channel.si",
            "-m",
            "Logger",
            "--invariant",
            "true",
            "--mode",
            "pessimistic",
        ],
    ),
    ("wf_fire", &["wf", "corpus/fire.si", "-m", "Fire"]),
    (
        "wf_json",
        &["--json", "wf", "corpus/channel.si", "-m", "Receiver"],
    ),
    ("info_fire", &["info", "corpus/fire.si"]),
    (
        "info_channel_json",
        &["--json", "info", "corpus/channel.si"],
    ),
    (
        "error_unknown_module",
        &["refine", "corpus/fire.si", "-m", "Fire", "-m", "Nope"],
    ),
    ("error_missing_file", &["info", "corpus/absent.si"]),
    ("error_parse", &["info", "tests/fixtures/broken.si"]),
    (
        "error_invalid",
        &["wf", "tests/fixtures/invalid.si", "-m", "Twice"],
    ),
    (
        "error_same_module",
        &["compose", "corpus/fire.si", "-m", "Fire", "-m", "Fire"],
    ),
    (
        "error_one_module",
        &["refine", "corpus/fire.si", "-m", "Fire"],
    ),
    (
        "error_bad_invariant",
        &[
            "check",
            "corpus/fire.si",
            "-m",
            "Fire",
            "--invariant",
            "seen",
            "--mode",
            "optimistic",
        ],
    ),
    (
        "error_bad_mode",
        &[
            "check",
            "corpus/fire.si",
            "-m",
            "Fire",
            "--invariant",
            "true",
            "--mode",
            "hopeful",
        ],
    ),
    ("error_no_subcommand", &[]),
];

pub fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.txt"))
}

pub fn check_schema(v: &Value) {
    let obj = v.as_object().expect("verdict object");
    for key in obj.keys() {
        assert!(
            ["verdict", "witness", "stats", "extras"].contains(&key.as_str()),
            "{key}"
        );
    }
    assert!(obj["verdict"].is_string());
    if let Some(w) = obj.get("witness") {
        assert!(w.as_array().unwrap().iter().all(Value::is_string));
    }
    let stats = obj["stats"].as_object().unwrap();
    assert_eq!(stats.len(), 3);
    for key in ["nodes", "iterations", "time_ms"] {
        assert!(stats[key].is_u64(), "{key}");
    }
    assert!(obj["extras"].is_object());
}

/// The exit code a verdict word calls for; anything else is a usage or
/// input error.
pub fn verdict_code(verdict: &str) -> i32 {
    match verdict {
        "COMPATIBLE" | "REFINES" | "SAFE" | "WELL-FORMED" | "OK" => EXIT_OK,
        "INCOMPATIBLE" | "DOES-NOT-REFINE" | "UNSAFE" | "ILL-FORMED" => EXIT_NEGATIVE,
        _ => EXIT_USAGE,
    }
}

/// The verdict word of a run, read from JSON when `--json` was given.
pub fn verdict_of(args: &[&str], r: &Run) -> String {
    if args.first() == Some(&"--json") && r.code != EXIT_USAGE {
        let v: Value = serde_json::from_str(&r.stdout).unwrap();
        v["verdict"].as_str().unwrap().to_string()
    } else {
        r.stdout.lines().next().unwrap_or("").to_string()
    }
}

/// Compares one case with its golden file, or rewrites the file when
/// blessing.
pub fn golden_matches(name: &str, args: &[&str], bless: bool) -> Result<(), String> {
    let got = transcript(args, &sociable(args));
    let path = golden_path(name);
    if bless {
        std::fs::write(&path, &got).unwrap();
        return Ok(());
    }
    let want = std::fs::read_to_string(&path)
        .map_err(|_| format!("missing {}; run with SOCIABLE_BLESS=1", path.display()))?;
    if got == want {
        Ok(())
    } else {
        Err(format!("--- {name}: expected\n{want}--- got\n{got}"))
    }
}

/// Every corpus pair and module through `--json`, with the exit code and
/// verdict compared with direct library calls.
pub fn corpus_agreement() -> usize {
    let mut runs = 0;
    for files in super::GROUPS {
        let paths: Vec<String> = files.iter().map(|f| format!("corpus/{f}")).collect();
        let lib = super::load(files);
        let names: Vec<String> = lib.modules.iter().map(|m| m.name.text.clone()).collect();
        for p in &names {
            for q in &names {
                if p == q {
                    continue;
                }
                let (ip, iq) = (lib.interface(p).unwrap(), lib.interface(q).unwrap());
                for sub in ["compose", "refine"] {
                    let mut args: Vec<&str> = vec!["--json", sub];
                    args.extend(paths.iter().map(String::as_str));
                    args.extend(["-m", p, "-m", q]);
                    let r = sociable(&args);
                    let mut space = Space::new();
                    let code = if sub == "compose" {
                        match sociable::compose::compose(&mut space, &ip, &iq) {
                            Ok(_) => EXIT_OK,
                            Err(
                                ComposeError::Incompatible { .. }
                                | ComposeError::NoCommonInit { .. },
                            ) => EXIT_NEGATIVE,
                            // Clashing declarations are an input error, not a verdict.
                            Err(_) => EXIT_USAGE,
                        }
                    } else if sociable::refine::refines(&mut space, &ip, &iq).refines {
                        EXIT_OK
                    } else {
                        EXIT_NEGATIVE
                    };
                    assert_eq!(r.code, code, "{args:?}");
                    if code == EXIT_USAGE {
                        assert!(r.stdout.is_empty() && !r.stderr.is_empty());
                        continue;
                    }
                    let v: Value = serde_json::from_str(&r.stdout)
                        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}{}", r.stdout, r.stderr));
                    check_schema(&v);
                    runs += 1;
                }
            }
            for mode in ["pessimistic", "optimistic"] {
                let mut args: Vec<&str> = vec!["--json", "check"];
                args.extend(paths.iter().map(String::as_str));
                args.extend(["-m", p, "--invariant", "true", "--mode", mode]);
                let r = sociable(&args);
                assert_eq!(r.code, EXIT_OK, "{args:?}");
                check_schema(&serde_json::from_str(&r.stdout).unwrap());
                runs += 1;
            }
            let mut args: Vec<&str> = vec!["--json", "wf"];
            args.extend(paths.iter().map(String::as_str));
            args.extend(["-m", p]);
            let r = sociable(&args);
            let wf = sociable::safety::well_formed(lib.module(p).unwrap());
            assert_eq!(r.code == EXIT_OK, wf.ok);
            check_schema(&serde_json::from_str(&r.stdout).unwrap());
            runs += 1;
        }
    }
    runs
}
