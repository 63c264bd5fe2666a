//! Sample a planted clique instance, round-trip it through the graph file
//! format and measure a few subsets against it.

use plandscape::model::{edge_count, graph_to_string, overlap, read_graph, sample_planted, VertexSubset};

fn main() -> plandscape::Result<()> {
    let g = sample_planted(14, 4, 7)?;
    println!("planted clique: {}", g.planted().to_dashed());
    println!("total edges: {}", g.graph().edge_total());

    let text = graph_to_string(&g);
    print!("{text}");
    let back = read_graph(text.as_bytes())?;
    assert_eq!(back, g);

    for members in [vec![0, 1, 2, 3, 4], g.planted().members().to_vec()] {
        let s = VertexSubset::new(members, g.n())?;
        println!(
            "subset {:<12} edges {:>2}  overlap {}",
            s.to_dashed(),
            edge_count(&g, &s)?,
            overlap(&g, &s)?
        );
    }
    Ok(())
}
