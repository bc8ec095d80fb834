//! An invariant checked in both modes. The guard keeps `!seen` only if its
//! environment never fires, which the optimistic check allows for.

use sociable::model::Space;
use sociable::safety::{check_optimistic, check_pessimistic};
use sociable::syntax::parse_expr;
use sociable::Library;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/fire.si");
    let guard = Library::from_files(&[path])?.interface("Guard")?;
    let mut space = Space::new();

    for text in ["alarm | !seen", "!seen"] {
        let phi = parse_expr(text)?;
        let pes = check_pessimistic(&mut space, &guard, &phi)?;
        let opt = check_optimistic(&mut space, &guard, &phi)?;
        println!(
            "Guard keeps {text}: pessimistically {}, optimistically {}",
            pes.safe, opt.safe
        );
        if let Some(trace) = pes.witness {
            println!("{trace}");
        }
    }
    Ok(())
}
