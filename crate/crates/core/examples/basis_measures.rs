//! Measures on bases: exact LP search for equal element marginals.

use std::error::Error;

use udm::graphic::{cycle_matroid, named};
use udm::linalg::int;
use udm::matroid::{tadpole, Matroid};
use udm::measure::{find_e_uniform_measure, find_positive_measure, verify_measure, BasisMeasure, MeasureCheck};

fn show(name: &str, m: &Matroid) -> Result<(), Box<dyn Error>> {
    println!("{name}: {} bases", m.basis_count());
    match find_e_uniform_measure(m)? {
        Some(mu) => println!("  equal marginals: {}", mu.normalized().describe()),
        None => println!("  no measure with equal marginals"),
    }
    match find_positive_measure(m)? {
        Some(mu) => println!("  positive on every basis: {}", mu.has_full_support(m)),
        None => println!("  no positive measure with equal marginals"),
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    show("tadpole", &tadpole())?;
    show("diamond", &cycle_matroid(&named::diamond())?)?;
    show("U(2,4)", &Matroid::uniform(4, 2))?;

    let m = cycle_matroid(&named::complete(4))?;
    let uniform = BasisMeasure::constant(&m, int(1));
    match verify_measure(&m, &uniform)? {
        MeasureCheck::EUniform { marginal } => println!("K4 uniform measure: every marginal {marginal}"),
        MeasureCheck::NotEUniform { first, second, .. } => println!("K4: elements {first} and {second} differ"),
    }
    Ok(())
}
