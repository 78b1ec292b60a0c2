//! File formats: reading inputs and writing certificates as JSON.

use std::error::Error;

use udm::graphic::{is_strictly_uniformly_dense_graph, CheckMode};
use udm::io::{certificate_json, graph_text, matroid_json, parse_certificate, parse_graph, parse_matroid};
use udm::matroid::{is_uniformly_dense, ScanOptions};

const GRAPH: &str = "\
# diamond: a 4-cycle with one chord
4 5
0 1
1 2
2 3
3 0
0 2
";

const MATROID: &str = r#"{"n": 4, "bases": [[0, 1], [0, 2], [0, 3]]}"#;

fn main() -> Result<(), Box<dyn Error>> {
    let g = parse_graph(GRAPH, 0)?;
    print!("{}", graph_text(&g, 1));
    let cert = is_strictly_uniformly_dense_graph(&g, CheckMode::Auto, &ScanOptions::default())?;
    let json = certificate_json(&cert, 0);
    println!("{}", serde_json::to_string_pretty(&json)?);
    assert_eq!(parse_certificate(&json, 0)?, cert);

    let m = parse_matroid(MATROID, 0)?;
    println!("{}", matroid_json(&m, 1));
    let cert = is_uniformly_dense(&m)?;
    println!("{}", certificate_json(&cert, 1));
    Ok(())
}
