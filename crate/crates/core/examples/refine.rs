//! Checks the fire variants against each other by alternating simulation.
//! Accepting more inputs is fine; emitting a new kind of output is not.

use sociable::model::Space;
use sociable::refine::refines;
use sociable::Library;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus");
    let lib = Library::from_files(&[format!("{dir}/fire.si"), format!("{dir}/fire_variants.si")])?;
    let mut space = Space::new();
    for (p, q) in [
        ("ResettableFire", "Fire"),
        ("Fire", "ResettableFire"),
        ("NoisyFire", "Fire"),
        ("LaxGuard", "Guard"),
    ] {
        let verdict = refines(&mut space, &lib.interface(p)?, &lib.interface(q)?);
        match verdict.violation {
            None => println!("{p} refines {q} ({} iterations)", verdict.iterations()),
            Some(v) => println!("{p} does not refine {q}: {}", v.message),
        }
    }
    Ok(())
}
