use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::json;

use super::{body, read, Failure, Handled, Input, RunConfig, EXIT_FAILS, EXIT_HOLDS};
use crate::graphic::edge_blocks;
use crate::io;
use crate::linalg::Rational;
use crate::matroid::{Certificate, Density, Subset, Verdict};
use crate::representable::{matroid_from_matrix, matroid_from_projection};

/// Rank function, components and basis count of the input.
struct Oracle<'a> {
    n: usize,
    rank: Box<dyn Fn(Subset) -> usize + 'a>,
    components: Vec<Subset>,
    basis_count: BigInt,
}

fn oracle(input: &Input) -> Result<Oracle<'_>, Failure> {
    Ok(match input {
        Input::Matroid(m) => Oracle {
            n: m.ground_size(),
            rank: Box::new(|s| m.rank(s)),
            components: m.connected_components(),
            basis_count: m.basis_count().into(),
        },
        Input::Graph(g) => Oracle {
            n: g.edge_count(),
            rank: Box::new(|s| g.rank(s)),
            components: edge_blocks(g),
            basis_count: g.spanning_forest_count(),
        },
        Input::Matrix(x) => {
            let m = matroid_from_matrix(x)?;
            Oracle {
                n: m.ground_size(),
                rank: Box::new(move |s| x.select_columns(&s.indices()).rank()),
                components: m.connected_components(),
                basis_count: m.basis_count().into(),
            }
        }
        Input::Projection(t) => {
            let m = matroid_from_projection(t)?;
            let components = m.connected_components();
            let basis_count = m.basis_count().into();
            Oracle { n: m.ground_size(), rank: Box::new(move |s| m.rank(s)), components, basis_count }
        }
    })
}

fn is_component_union(s: Subset, components: &[Subset]) -> bool {
    components.iter().all(|c| {
        let part = s.intersection(*c);
        part.is_empty() || part == *c
    })
}

/// Re-checks every claim of a certificate against the input in one pass.
pub(super) fn verify(config: &RunConfig, input: &Input) -> Handled {
    let path = config.certificate.as_ref().ok_or_else(|| Failure::Usage("verify requires --certificate FILE".into()))?;
    let value = io::parse_json(&read(path)?)?;
    let cert_value = value.get("certificate").unwrap_or(&value);
    let cert = io::parse_certificate(cert_value, config.offset())?;
    let oracle = oracle(input)?;
    let problems = check_certificate(&cert, &oracle);
    let code = if problems.is_empty() { EXIT_HOLDS } else { EXIT_FAILS };
    Ok((
        code,
        body([("verdict", json!(cert.verdict.name())), ("valid", json!(problems.is_empty())), ("problems", json!(problems))]),
    ))
}

fn check_certificate(cert: &Certificate, o: &Oracle<'_>) -> Vec<String> {
    let mut problems = Vec::new();
    let r = (o.rank)(Subset::full(o.n));
    let density = Density::of(o.n, r);
    if cert.density != density {
        problems.push(format!("ground density is {density}, certificate states {}", cert.density));
    }
    if let Some(v) = &cert.violator {
        if v.subset.indices().last().is_some_and(|&i| i >= o.n) {
            problems.push("violator mentions elements outside the ground set".into());
            return problems;
        }
        if v.subset.is_empty() {
            problems.push("violator is empty".into());
        }
        let actual = (o.rank)(v.subset);
        if actual != v.rank {
            problems.push(format!("violator rank is {actual}, certificate states {}", v.rank));
        }
    }
    match cert.verdict {
        Verdict::NotUniformlyDense => match &cert.violator {
            None => problems.push("no violator given".into()),
            Some(v) => {
                let d = Density::of(v.size, (o.rank)(v.subset));
                if d <= density {
                    problems.push(format!("violator density {d} does not exceed {density}"));
                }
            }
        },
        Verdict::UniformlyDenseNotStrict => match &cert.violator {
            None => problems.push("no boundary set given".into()),
            Some(v) => {
                let d = Density::of(v.size, (o.rank)(v.subset));
                if d != density {
                    problems.push(format!("boundary set density {d} differs from {density}"));
                }
                if is_component_union(v.subset, &o.components) {
                    problems.push("boundary set is a union of components".into());
                }
            }
        },
        Verdict::UniformlyDense | Verdict::StrictlyUniformlyDense => {}
    }
    if cert.verdict.is_uniformly_dense() {
        match &cert.witness {
            None => problems.push("no witness measure given".into()),
            Some(mu) => {
                let zero = Rational::zero();
                let mut marginals = vec![zero.clone(); o.n];
                let mut total = zero.clone();
                for (b, w) in mu.weights() {
                    if b.len() != r || b.indices().last().is_some_and(|&i| i >= o.n) || (o.rank)(*b) != r {
                        problems.push(format!("witness support {b} is not a basis"));
                        continue;
                    }
                    if w.is_negative() {
                        problems.push(format!("negative weight on {b}"));
                    }
                    for e in b.iter() {
                        marginals[e] += w;
                    }
                    total += w;
                }
                if total.is_zero() {
                    problems.push("witness has zero mass".into());
                }
                if marginals.windows(2).any(|p| p[0] != p[1]) {
                    problems.push("witness marginals are not all equal".into());
                }
                if cert.verdict.is_strict() {
                    let positive = mu.weights().iter().filter(|(_, w)| w.is_positive()).count();
                    if BigInt::from(positive) != o.basis_count {
                        problems.push(format!("witness is positive on {positive} of {} bases", o.basis_count));
                    }
                }
            }
        }
    }
    problems
}
