//! Writes the graph, a cobweb and a preimage tree as SVG files.
//!
//!     cargo run --example render_svg -- [out_dir]

use std::path::PathBuf;

use backlimit::fixtures::fixture_map;
use backlimit::svg::{render_cobweb, render_graph, render_preimage_tree};
use backlimit::Rat;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    std::fs::create_dir_all(&dir)?;
    let f = fixture_map("fig1")?;
    let t = fixture_map("tent")?;
    let files = [
        ("fig1_graph.svg", render_graph(&f)),
        ("tent_cobweb.svg", render_cobweb(&t, &Rat::new(2, 7), 12)?),
        ("tent_tree.svg", render_preimage_tree(&t, &Rat::one(), 5, 1000)?),
    ];
    for (name, doc) in files {
        let path = dir.join(name);
        std::fs::write(&path, doc)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
