//! Composes the fire detector with two guards. The lenient guard yields a
//! composite, printed back as `.si`; the strict one is incompatible and the
//! witness shows the rejected emission.

use sociable::compose::{compose, ComposeError};
use sociable::model::Space;
use sociable::Library;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus");
    let lib = Library::from_files(&[format!("{dir}/fire.si")])?;
    let fire = lib.interface("Fire")?;
    let guard = lib.interface("Guard")?;
    let mut space = Space::new();

    let composite = compose(&mut space, &fire, &guard)?;
    println!("Fire and Guard are compatible; the composite is\n");
    println!("{}", composite.interface.to_source());

    let strict = Library::from_files(&[format!("{dir}/fire_strict.si")])?.interface("Guard")?;
    match compose(&mut space, &fire, &strict) {
        Err(ComposeError::Incompatible { witness, .. }) => {
            println!("a guard that insists on alarm' = false cannot work with Fire:");
            println!("{}", witness.trace);
        }
        other => println!("unexpected: {:?}", other.map(|c| c.interface.name)),
    }
    Ok(())
}
