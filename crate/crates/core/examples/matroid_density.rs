//! Uniform density of small matroids given by their bases.

use std::error::Error;

use udm::matroid::{
    direct_sum, dual, is_strictly_uniformly_dense, is_uniformly_dense, tadpole, union, Matroid, Subset,
};

fn report(name: &str, m: &Matroid) -> Result<(), Box<dyn Error>> {
    let cert = is_strictly_uniformly_dense(m)?;
    print!("{name:<14} n={} r={} density={} {}", m.ground_size(), m.full_rank(), cert.density, cert.verdict);
    if let Some(v) = &cert.violator {
        print!("  subset {} has density {}", v.subset, v.density);
    }
    println!();
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    let t = tadpole();
    report("tadpole", &t)?;
    report("U(2,4)", &Matroid::uniform(4, 2))?;

    // Direct sum of two parallel pairs.
    let pairs = Matroid::new(4, &[vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]])?;
    report("pairs", &pairs)?;

    report("dual tadpole", &dual(&t))?;
    report("U(1,2)+U(1,3)", &direct_sum(&Matroid::uniform(2, 1), &Matroid::uniform(3, 1))?)?;
    report("U(1,3)+U(1,3)", &direct_sum(&Matroid::uniform(3, 1), &Matroid::uniform(3, 1))?)?;

    let shifted = t.relabel(&[1, 2, 3, 0]);
    report("tadpole union", &union(&t, &shifted)?)?;

    let cert = is_uniformly_dense(&t)?;
    let worst = cert.violator.expect("tadpole is not uniformly dense");
    println!("rank of {} is {}, ground density {}", worst.subset, t.rank(worst.subset), t.matroid_density());
    println!("rank of {{0}} is {}", t.rank(Subset::from_indices(&[0])));
    Ok(())
}
