use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{edge_laplacian, lambda_max, normalized_laplacian, nullity, SpectralError};
use crate::graphic::{is_uniformly_dense_graph, tree_packing, CheckMode, Graph, GraphError};
use crate::linalg::{usize_rat, Rational};
use crate::matroid::{full_mask, ScanOptions, Subset, Tracker, Violator};

/// Largest edge count for exhaustive subset loops.
pub const SPECTRAL_SUBSET_CAP: usize = 18;
pub const DEFAULT_SAMPLE_SEED: u64 = 0x5eed_0001;
const BOUND_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum SpectralVerdict {
    ConsistentUd,
    /// Edge set whose cycle-space nullity per edge exceeds that of the whole graph.
    Violation(Violator),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCheck {
    pub verdict: SpectralVerdict,
    /// `rank L(G) - rank L(G|A) <= (|E| - |A|) / rho(G)` for every `A`.
    pub rank_condition_holds: bool,
    /// `n0(L1(G|A)) / |A| <= n0(L1(G)) / |E|` for every `A`.
    pub nullity_condition_holds: bool,
    pub subsets: u64,
}

fn prepared(g: &Graph) -> Result<Graph, SpectralError> {
    let h = g.without_isolated();
    if h.edge_count() == 0 {
        return Err(GraphError::EmptyEdgeSet.into());
    }
    Ok(h)
}

fn subset_cap(m: usize) -> Result<(), SpectralError> {
    if m > SPECTRAL_SUBSET_CAP {
        return Err(SpectralError::CapExceeded { what: "edge set", size: m, cap: SPECTRAL_SUBSET_CAP });
    }
    Ok(())
}

/// Uniform density from Laplacian ranks and edge-Laplacian nullities over all edge subsets.
///
/// The reported violator has maximal density, then minimal size, then minimal
/// mask, with ranks read off the edge-Laplacian nullities.
pub fn spectral_ud_check(g: &Graph, options: &ScanOptions) -> Result<SpectralCheck, SpectralError> {
    let h = prepared(g)?;
    let m = h.edge_count();
    subset_cap(m)?;
    let rank_l = normalized_laplacian(&h)?.rank();
    let ground_rank = m - nullity(&edge_laplacian(&h)?);
    let parts = crate::parallel::chunked(1u64 << m, options.threads, |lo, hi| {
        let mut tracker = Tracker::new(m, ground_rank, None);
        let mut rank_ok = true;
        for mask in lo..hi {
            let a = h.edge_subgraph(Subset::from_mask(mask));
            let size = a.edge_count();
            let n0 = nullity(&edge_laplacian(&a).expect("no isolated vertices"));
            tracker.offer(mask, size, size - n0);
            let drop = rank_l - normalized_laplacian(&a).expect("no isolated vertices").rank();
            if drop * m > (m - size) * ground_rank {
                rank_ok = false;
            }
        }
        (tracker, rank_ok)
    });
    let mut total = Tracker::new(m, ground_rank, None);
    let mut rank_condition_holds = true;
    for (t, ok) in parts {
        total.absorb(t);
        rank_condition_holds &= ok;
    }
    let scan = total.finish();
    let nullity_condition_holds = scan.violator.is_none();
    let verdict = match scan.violator {
        Some(v) => SpectralVerdict::Violation(v),
        None => SpectralVerdict::ConsistentUd,
    };
    Ok(SpectralCheck { verdict, rank_condition_holds, nullity_condition_holds, subsets: (1u64 << m) - 1 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl BoundCheck {
    /// `lhs >= rhs` up to `1e-9`.
    pub fn holds(&self) -> bool {
        self.lhs >= self.rhs - BOUND_TOL
    }

    pub fn is_equality(&self) -> bool {
        (self.lhs - self.rhs).abs() <= BOUND_TOL
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsetBound {
    pub subset: Subset,
    pub check: BoundCheck,
}

/// Outcome of a per-subset bound over the selected subsets.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SubsetBounds {
    pub checked: u64,
    pub violations: u64,
    /// Subset with the smallest `lhs - rhs`, the first such in scan order.
    pub tightest: Option<SubsetBound>,
    /// First violating subset in scan order.
    pub first_violation: Option<SubsetBound>,
}

impl SubsetBounds {
    fn record(&mut self, subset: Subset, check: BoundCheck) {
        self.checked += 1;
        let entry = SubsetBound { subset, check };
        if !check.holds() {
            self.violations += 1;
            self.first_violation.get_or_insert(entry);
        }
        let slack = check.lhs - check.rhs;
        if self.tightest.is_none_or(|t| slack < t.check.lhs - t.check.rhs) {
            self.tightest = Some(entry);
        }
    }

    fn absorb(&mut self, other: SubsetBounds) {
        self.checked += other.checked;
        self.violations += other.violations;
        if self.first_violation.is_none() {
            self.first_violation = other.first_violation;
        }
        if let Some(t) = other.tightest {
            let slack = t.check.lhs - t.check.rhs;
            if self.tightest.is_none_or(|s| slack < s.check.lhs - s.check.rhs) {
                self.tightest = Some(t);
            }
        }
    }

    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetSelection {
    All,
    Sample { count: usize, seed: u64 },
}

impl SubsetSelection {
    /// `all` or `sample:N`.
    pub fn parse(text: &str) -> Option<Self> {
        if text == "all" {
            return Some(SubsetSelection::All);
        }
        let count = text.strip_prefix("sample:")?.parse().ok()?;
        Some(SubsetSelection::Sample { count, seed: DEFAULT_SAMPLE_SEED })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PackingBound {
    /// Edge-disjoint spanning forests found.
    pub trees: usize,
    pub floor_density: usize,
    pub check: BoundCheck,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub lambda_max: f64,
    pub density: Rational,
    pub uniformly_dense: bool,
    pub vertices: usize,
    pub edges: usize,
    pub components: usize,
    pub betti: usize,
    pub laplacian_nullity: usize,
    pub edge_laplacian_nullity: usize,
    /// `lambda_max(G) >= 2 / rho(G)`.
    pub global: BoundCheck,
    /// Tree-packing strengthening, evaluated for uniformly dense graphs.
    pub packing: Option<PackingBound>,
    /// `lambda_max(G) >= 2 rank(A) / (|A| + |boundary(A)|)`.
    pub boundary: SubsetBounds,
    /// `lambda_max(G|A) >= 2 / rho(G)`; a violation certifies non-uniform density.
    pub stable: SubsetBounds,
}

impl BoundsReport {
    /// Failures of statements that must hold; empty for a consistent report.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.laplacian_nullity != self.components {
            out.push(format!("Laplacian nullity {} != components {}", self.laplacian_nullity, self.components));
        }
        if self.edge_laplacian_nullity != self.betti {
            out.push(format!("edge Laplacian nullity {} != cycle rank {}", self.edge_laplacian_nullity, self.betti));
        }
        if !self.global.holds() {
            out.push(format!("global bound: {} < {}", self.global.lhs, self.global.rhs));
        }
        if let Some(v) = self.boundary.first_violation {
            out.push(format!("boundary bound fails on {}", v.subset));
        }
        if self.uniformly_dense {
            if let Some(v) = self.stable.first_violation {
                out.push(format!("restriction bound fails on {} for a uniformly dense graph", v.subset));
            }
            if let Some(p) = &self.packing {
                if !p.check.holds() {
                    out.push(format!("packing bound: {} < {}", p.check.lhs, p.check.rhs));
                }
                if p.trees < p.floor_density {
                    out.push(format!("only {} disjoint spanning forests, floor density {}", p.trees, p.floor_density));
                }
            }
        }
        out
    }

    /// A violated restriction bound proves the graph is not uniformly dense.
    pub fn certifies_not_uniformly_dense(&self) -> bool {
        !self.stable.holds()
    }
}

/// Edges outside `a` with an endpoint touched by `a`.
fn boundary_size(g: &Graph, a: Subset) -> usize {
    let mut touched = vec![false; g.vertex_count()];
    for i in a.iter() {
        let (u, v) = g.edges()[i];
        touched[u] = true;
        touched[v] = true;
    }
    (0..g.edge_count()).filter(|&i| !a.contains(i) && (touched[g.edges()[i].0] || touched[g.edges()[i].1])).count()
}

fn inverse_density(g: &Graph) -> f64 {
    g.full_rank() as f64 / g.edge_count() as f64
}

/// `lambda_max(G|A)` against `2 / rho(G)`.
pub fn stable_bound(g: &Graph, a: Subset) -> Result<BoundCheck, SpectralError> {
    let h = prepared(g)?;
    Ok(BoundCheck { lhs: lambda_max(&h.edge_subgraph(a))?, rhs: 2.0 * inverse_density(&h) })
}

fn subset_checks(h: &Graph, lam: f64, mask: u64, boundary: &mut SubsetBounds, stable: &mut SubsetBounds) -> Result<(), SpectralError> {
    let a = Subset::from_mask(mask);
    let sub = h.edge_subgraph(a);
    let lam_a = lambda_max(&sub)?;
    let rank_a = sub.full_rank() as f64;
    let rhs = 2.0 * rank_a / (a.len() + boundary_size(h, a)) as f64;
    boundary.record(a, BoundCheck { lhs: lam, rhs });
    stable.record(a, BoundCheck { lhs: lam_a, rhs: 2.0 * inverse_density(h) });
    Ok(())
}

/// Evaluates the largest-eigenvalue lower bounds, nullity identities and the
/// tree-packing strengthening for `g` with isolated vertices removed.
pub fn lambda_max_bounds(
    g: &Graph,
    selection: SubsetSelection,
    options: &ScanOptions,
) -> Result<BoundsReport, SpectralError> {
    let h = prepared(g)?;
    let m = h.edge_count();
    let r = h.full_rank();
    let lam = lambda_max(&h)?;
    let density = usize_rat(m) / usize_rat(r);
    let components = h.components(h.all_edges());
    let uniformly_dense = is_uniformly_dense_graph(&h, CheckMode::Auto, options)?.verdict.is_uniformly_dense();
    let global = BoundCheck { lhs: lam, rhs: 2.0 * inverse_density(&h) };
    let packing = if uniformly_dense {
        let floor_density = density.floor().to_integer().try_into().expect("small density");
        let rhs = global.rhs + 2.0 * (floor_density as f64 - 1.0) * components as f64 / m as f64;
        Some(PackingBound { trees: tree_packing(&h)?, floor_density, check: BoundCheck { lhs: lam, rhs } })
    } else {
        None
    };

    let mut boundary = SubsetBounds::default();
    let mut stable = SubsetBounds::default();
    match selection {
        SubsetSelection::All => {
            subset_cap(m)?;
            let parts = crate::parallel::chunked(1u64 << m, options.threads, |lo, hi| {
                let mut b = SubsetBounds::default();
                let mut s = SubsetBounds::default();
                for mask in lo..hi {
                    subset_checks(&h, lam, mask, &mut b, &mut s)?;
                }
                Ok::<_, SpectralError>((b, s))
            });
            for part in parts {
                let (b, s) = part?;
                boundary.absorb(b);
                stable.absorb(s);
            }
        }
        SubsetSelection::Sample { count, seed } => {
            if m > 64 {
                return Err(SpectralError::CapExceeded { what: "edge set", size: m, cap: 64 });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let full = full_mask(m);
            let mut drawn = 0;
            while drawn < count {
                let mask = rng.random::<u64>() & full;
                if mask != 0 {
                    subset_checks(&h, lam, mask, &mut boundary, &mut stable)?;
                    drawn += 1;
                }
            }
        }
    }

    Ok(BoundsReport {
        lambda_max: lam,
        density,
        uniformly_dense,
        vertices: h.vertex_count(),
        edges: m,
        components,
        betti: h.betti(h.all_edges()),
        laplacian_nullity: nullity(&normalized_laplacian(&h)?),
        edge_laplacian_nullity: nullity(&edge_laplacian(&h)?),
        global,
        packing,
        boundary,
        stable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphic::{generate, is_uniformly_dense_graph, named};

    #[test]
    fn tadpole_violation() {
        let check = spectral_ud_check(&named::tadpole(), &ScanOptions::default()).unwrap();
        match check.verdict {
            SpectralVerdict::Violation(v) => assert_eq!(v.subset, Subset::from_indices(&[1, 2, 3])),
            other => panic!("unexpected {other:?}"),
        }
        assert!(!check.rank_condition_holds && !check.nullity_condition_holds);
        for g in [named::cycle(4), named::path(4)] {
            let check = spectral_ud_check(&g, &ScanOptions::default()).unwrap();
            assert_eq!(check.verdict, SpectralVerdict::ConsistentUd);
            assert!(check.rank_condition_holds);
        }
    }

    #[test]
    fn agrees_with_exhaustive_check() {
        let opts = ScanOptions::default();
        for m in 1..=6 {
            for g in generate::connected_graphs_with_edges(m) {
                let cert = is_uniformly_dense_graph(&g, CheckMode::Exhaustive, &opts).unwrap();
                let check = spectral_ud_check(&g, &opts).unwrap();
                assert_eq!(check.rank_condition_holds, cert.verdict.is_uniformly_dense());
                assert_eq!(check.nullity_condition_holds, cert.verdict.is_uniformly_dense());
                if let SpectralVerdict::Violation(v) = check.verdict {
                    assert_eq!(Some(v), cert.violator);
                }
            }
        }
    }

    #[test]
    fn tree_bounds_are_equalities() {
        let r = lambda_max_bounds(&named::path(5), SubsetSelection::All, &ScanOptions::default()).unwrap();
        assert!((r.lambda_max - 2.0).abs() < 1e-9);
        assert!(r.global.is_equality());
        assert!(r.stable.holds());
        assert!(r.stable.tightest.unwrap().check.is_equality());
        assert!(r.violations().is_empty());
    }

    #[test]
    fn complete_graph_packing_equality() {
        let r = lambda_max_bounds(&named::complete(4), SubsetSelection::All, &ScanOptions::default()).unwrap();
        let p = r.packing.as_ref().unwrap();
        assert_eq!((p.trees, p.floor_density), (2, 2));
        assert!(p.check.is_equality());
        assert!(p.check.rhs >= r.global.rhs);
        assert!(r.violations().is_empty());
    }

    #[test]
    fn clique_with_long_cycle() {
        let g = named::clique_and_cycle();
        let check = stable_bound(&g, named::clique_and_cycle_k5()).unwrap();
        assert!((check.lhs - 1.25).abs() < 1e-9);
        assert!((check.rhs - 44.0 / 29.0).abs() < 1e-12);
        assert!(!check.holds());
        let r = lambda_max_bounds(&g, SubsetSelection::Sample { count: 50, seed: 1 }, &ScanOptions::default()).unwrap();
        assert!(!r.uniformly_dense);
        assert!(r.violations().is_empty());
        assert_eq!(r.edge_laplacian_nullity, 7);
    }

    #[test]
    fn selection_parse() {
        assert_eq!(SubsetSelection::parse("all"), Some(SubsetSelection::All));
        assert_eq!(SubsetSelection::parse("sample:5"), Some(SubsetSelection::Sample { count: 5, seed: DEFAULT_SAMPLE_SEED }));
        assert_eq!(SubsetSelection::parse("some"), None);
    }
}
