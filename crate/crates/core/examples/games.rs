//! The safety game behind composition, played by hand on the product of
//! Burst and PickyReceiver: the error states, their output attractor, the
//! dual winning set, and a shortest path into the errors.

use sociable::compose::{compatible_states, product};
use sociable::model::{format_valuation, Space};
use sociable::Library;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/channel.si");
    let lib = Library::from_files(&[path])?;
    let burst = lib.interface("Burst")?;
    let picky = lib.interface("PickyReceiver")?;
    let mut space = Space::new();
    let prod = product(&mut space, &burst, &picky)?;
    let arena = &prod.arena;

    let total = arena.state_count(&mut space);
    let errors = arena.count(&mut space, prod.err);
    println!("{total} joint states, {errors} of them errors");

    let attr = arena.attr_output(&mut space, prod.err)?;
    let safe = arena.complement(&mut space, prod.err);
    let win = arena.win_safe(&mut space, safe)?;
    let dual = arena.complement(&mut space, attr.set);
    assert_eq!(win.set, dual);
    assert_eq!(win, compatible_states(&mut space, &prod));
    println!(
        "attractor: {} states after {} iterations; winning set: {} states",
        arena.count(&mut space, attr.set),
        attr.iterations,
        arena.count(&mut space, win.set)
    );

    // Outputs alone never leave the initial region; the danger starts once
    // the environment arms Burst.
    let reach = arena.reachable(&mut space, prod.init, arena.t_out)?;
    let touched = space.manager_mut().and(reach.set, attr.set);
    println!(
        "{} states reachable by outputs in {} rounds, {} of them losing",
        arena.count(&mut space, reach.set),
        reach.iterations(),
        arena.count(&mut space, touched)
    );
    let losing = space.manager_mut().and(attr.set, safe);
    if let Some(path) = arena.extract_trace(&mut space, losing, arena.t_out, prod.err)? {
        println!("from a losing state the outputs force an error:");
        for state in &path {
            println!("  {}", format_valuation(&prod.vars, state));
        }
    }
    Ok(())
}
