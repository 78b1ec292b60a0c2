//! Classification of graphs with cyclomatic number two.

use udm::graphic::{classify_bicyclic, named, BicyclicClass};

fn main() {
    for (a, b, c) in [(2, 3, 6), (3, 3, 6), (0, 4, 4), (1, 2, 2), (2, 2, 5), (4, 5, 6)] {
        let g = named::theta(a, b, c);
        let class = match classify_bicyclic(&g) {
            BicyclicClass::UniformlyDense(l) => format!("uniformly dense, paths {l:?}"),
            BicyclicClass::NotUniformlyDense(l) => format!("not uniformly dense, paths {l:?}"),
            BicyclicClass::NotBicyclic(reason) => format!("not bicyclic: {reason:?}"),
        };
        println!("theta({a},{b},{c}): {} edges, {class}", g.edge_count());
    }
    println!("tadpole: {:?}", classify_bicyclic(&named::tadpole()));
    println!("K4: {:?}", classify_bicyclic(&named::complete(4)));
}
