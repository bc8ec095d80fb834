//! Enumerates a module's states and moves explicitly and compares the
//! counts with the symbolic encoding.

use sociable::model::{compile, enumerate_explicit, Space};
use sociable::Library;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/channel.si");
    let lib = Library::from_files(&[path])?;
    for module in &lib.modules {
        let iface = lib.interface(&module.name.text)?;
        let graph = enumerate_explicit(&iface, 4096)?;
        let mut space = Space::new();
        let si = compile(&iface, &mut space)?;
        let symbolic = space.count_states(si.state_domain, &si.ids);
        assert_eq!(symbolic as usize, graph.states.len());
        println!(
            "{}: {} states, {} output edges, {} listened actions",
            iface.name,
            graph.states.len(),
            graph.output_edge_count(),
            graph.inputs.len()
        );
    }
    Ok(())
}
