//! Inequality chains among the catalog measures, encoded as DAGs of weighted
//! edges and verified over seeded randomized distribution pairs.
//!
//! Stacked alternatives in the source chains are parallel DAG branches sharing
//! endpoints, not a total order; each bracketed member is bounded
//! independently. Tolerances are relative to magnitude with floor 1: near
//! `P = Q` every measure vanishes quadratically or faster, so an absolute
//! tolerance would flag rounding noise near zero and mask real violations at
//! moderate separations.

use crate::distributions::Distribution;
use crate::divergences::{self, l_printed_form, l_printed_matches_chain};
use crate::measures::{BaseId, MeasureId, Ratio};
use crate::sampling::PairSampler;
use rayon::prelude::*;
use std::collections::HashMap;

/// One chain node: a positive linear form over catalog measures. Most nodes
/// are a single weighted measure; the series-relation chains need sums.
#[derive(Debug, Clone)]
pub struct ChainNode {
    pub terms: Vec<(Ratio, MeasureId)>,
}

impl ChainNode {
    fn one(coeff: Ratio, id: MeasureId) -> Self {
        ChainNode { terms: vec![(coeff, id)] }
    }

    pub fn label(&self) -> String {
        self.terms
            .iter()
            .map(|(c, id)| {
                if *c == Ratio::ONE {
                    id.name()
                } else {
                    format!("{c}*{id}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    fn value(&self, p: &Distribution, q: &Distribution) -> f64 {
        self.terms
            .iter()
            .map(|(c, id)| c.as_f64() * divergences::value(*id, p, q).expect("catalog measure"))
            .sum()
    }
}

/// A DAG of inequality edges: `edge (a, b)` asserts `node_a <= node_b`
/// pointwise over the simplex.
#[derive(Debug, Clone)]
pub struct ChainSpec {
    pub name: String,
    pub nodes: Vec<ChainNode>,
    pub edges: Vec<(usize, usize)>,
}

impl ChainSpec {
    fn new(name: &str, nodes: Vec<ChainNode>, edges: Vec<(usize, usize)>) -> Self {
        let spec = ChainSpec { name: name.to_string(), nodes, edges };
        spec.validate();
        spec
    }

    /// Construction invariants: coefficients positive, indexes in range,
    /// acyclic, and every node referenced by at least one edge.
    fn validate(&self) {
        assert!(!self.edges.is_empty(), "{}: no edges", self.name);
        let n = self.nodes.len();
        let mut referenced = vec![false; n];
        let mut indegree = vec![0usize; n];
        for &(a, b) in &self.edges {
            assert!(a < n && b < n && a != b, "{}: bad edge ({a},{b})", self.name);
            referenced[a] = true;
            referenced[b] = true;
            indegree[b] += 1;
        }
        assert!(referenced.iter().all(|&r| r), "{}: orphan node", self.name);
        for node in &self.nodes {
            assert!(!node.terms.is_empty());
            for (c, _) in &node.terms {
                assert!(c.num > 0 && c.den > 0, "{}: nonpositive coefficient", self.name);
            }
        }
        // Kahn's algorithm; all nodes must drain for the graph to be a DAG.
        let mut stack: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut seen = 0;
        let mut indeg = indegree;
        while let Some(i) = stack.pop() {
            seen += 1;
            for &(a, b) in &self.edges {
                if a == i {
                    indeg[b] -= 1;
                    if indeg[b] == 0 {
                        stack.push(b);
                    }
                }
            }
        }
        assert_eq!(seen, n, "{}: cycle detected", self.name);
    }
}

/// A single observed violation of an edge.
#[derive(Debug, Clone)]
pub struct ViolationReport {
    pub chain: String,
    pub edge: (String, String),
    pub trial: u64,
    pub p: Distribution,
    pub q: Distribution,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs`; positive beyond tolerance when reported.
    pub deficit: f64,
}

/// Per-edge aggregate over a verification run.
#[derive(Debug, Clone)]
pub struct EdgeStats {
    pub from: String,
    pub to: String,
    pub trials: u64,
    pub violations: u64,
    /// Minimum of `(rhs - lhs) / max(1, |lhs|, |rhs|)` over all trials:
    /// how close the edge came to failing (negative means it did).
    pub worst_slack: f64,
    pub worst_slack_trial: u64,
}

#[derive(Debug, Clone)]
pub struct ChainRun {
    pub chain: String,
    pub trials: u64,
    pub seed: u64,
    pub tol: f64,
    pub dims: Vec<usize>,
    pub edges: Vec<EdgeStats>,
    pub violations: Vec<ViolationReport>,
}

/// Verify every edge of `chain` over `trials` seeded pairs; returns all
/// violations (an empty list means verified). Violations are data, not
/// errors.
pub fn verify(
    chain: &ChainSpec,
    trials: u64,
    dims: &[usize],
    seed: u64,
    tol: f64,
) -> Vec<ViolationReport> {
    run_chain(chain, trials, dims, seed, tol).violations
}

/// Like [`verify`] but also returns per-edge pass counts and worst slack.
/// Trials are evaluated in parallel and merged in trial order, so parallel
/// and serial runs produce identical reports.
pub fn run_chain(chain: &ChainSpec, trials: u64, dims: &[usize], seed: u64, tol: f64) -> ChainRun {
    assert!(trials >= 1 && tol > 0.0);
    let mut sampler = PairSampler::new(dims, seed);
    let pairs: Vec<(Distribution, Distribution)> =
        (0..trials).map(|_| sampler.next_pair()).collect();

    // node values per trial -> per-edge (slack, violation) rows
    let rows: Vec<Vec<(f64, f64, f64)>> = pairs
        .par_iter()
        .map(|(p, q)| {
            let values: Vec<f64> = chain.nodes.iter().map(|n| n.value(p, q)).collect();
            chain
                .edges
                .iter()
                .map(|&(a, b)| {
                    let (lhs, rhs) = (values[a], values[b]);
                    let scale = 1f64.max(lhs.abs()).max(rhs.abs());
                    (lhs, rhs, (rhs - lhs) / scale)
                })
                .collect()
        })
        .collect();

    let mut edges: Vec<EdgeStats> = chain
        .edges
        .iter()
        .map(|&(a, b)| EdgeStats {
            from: chain.nodes[a].label(),
            to: chain.nodes[b].label(),
            trials,
            violations: 0,
            worst_slack: f64::INFINITY,
            worst_slack_trial: 0,
        })
        .collect();
    let mut violations = Vec::new();
    for (trial, row) in rows.iter().enumerate() {
        for (e, &(lhs, rhs, slack)) in row.iter().enumerate() {
            let stat = &mut edges[e];
            if slack < stat.worst_slack {
                stat.worst_slack = slack;
                stat.worst_slack_trial = trial as u64;
            }
            if lhs - rhs > tol * 1f64.max(lhs.abs()).max(rhs.abs()) {
                stat.violations += 1;
                violations.push(ViolationReport {
                    chain: chain.name.clone(),
                    edge: (stat.from.clone(), stat.to.clone()),
                    trial: trial as u64,
                    p: pairs[trial].0.clone(),
                    q: pairs[trial].1.clone(),
                    lhs,
                    rhs,
                    deficit: lhs - rhs,
                });
            }
        }
    }
    ChainRun {
        chain: chain.name.clone(),
        trials,
        seed,
        tol,
        dims: dims.to_vec(),
        edges,
        violations,
    }
}

fn r(num: u32, den: u32) -> Ratio {
    Ratio::new(num, den)
}

fn base(c: Ratio, b: BaseId) -> ChainNode {
    ChainNode::one(c, MeasureId::Base(b))
}

fn diff(c: Ratio, a: BaseId, b: BaseId) -> ChainNode {
    ChainNode::one(c, MeasureId::diff(a, b).unwrap())
}

fn l(c: Ratio, k: u8) -> ChainNode {
    ChainNode::one(c, MeasureId::l(k).unwrap())
}

fn lv(c: Ratio, k: u8) -> ChainNode {
    ChainNode::one(c, MeasureId::lv(k).unwrap())
}

fn linear_edges(n: usize) -> Vec<(usize, usize)> {
    (0..n - 1).map(|i| (i, i + 1)).collect()
}

/// The built-in chain catalog. Names are stable CLI selectors.
#[allow(clippy::vec_init_then_push)] // one push per chain, with commentary
pub fn builtin_chains() -> Vec<ChainSpec> {
    use BaseId::*;
    let mut out = Vec::new();

    // (1/4)Delta <= I <= h <= (1/8)J <= T <= (1/8)K0 <= (1/16)Psi <= (1/16)F
    out.push(ChainSpec::new(
        "eq15",
        vec![
            base(r(1, 4), Delta),
            base(Ratio::ONE, I),
            base(Ratio::ONE, Hellinger),
            base(r(1, 8), J),
            base(Ratio::ONE, T),
            base(r(1, 8), K0),
            base(r(1, 16), Psi),
            base(r(1, 16), F),
        ],
        linear_edges(8),
    ));

    // Difference chain with brackets; the nested member (1/3)d:psi-k0 <=
    // (1/9)d:f-delta threads through its own branch.
    out.push(ChainSpec::new(
        "eq21",
        vec![
            diff(r(1, 3), T, Delta),      // 0
            diff(r(2, 1), Hellinger, I),  // 1
            diff(r(1, 3), K0, Delta),     // 2
            diff(r(2, 1), J, Hellinger),  // 3
            diff(r(1, 2), K0, I),         // 4
            diff(r(2, 3), K0, Hellinger), // 5
            diff(Ratio::ONE, K0, J),      // 6
            diff(r(1, 6), Psi, Delta),    // 7
            diff(r(1, 5), Psi, I),        // 8
            diff(r(1, 4), Psi, J),        // 9
            diff(r(1, 3), Psi, T),        // 10
            diff(r(1, 3), Psi, K0),       // 11
            diff(r(1, 9), F, Delta),      // 12
            diff(r(1, 8), F, I),          // 13
            diff(r(2, 15), F, Hellinger), // 14
            diff(r(1, 7), F, J),          // 15
            diff(r(1, 6), F, T),          // 16
            diff(r(1, 6), F, K0),         // 17
            diff(r(1, 3), F, Psi),        // 18
        ],
        vec![
            (0, 2), (0, 3), (1, 2), (1, 3),
            (2, 4), (3, 4),
            (4, 5),
            (5, 6), (5, 7),
            (6, 8), (7, 8),
            (8, 9),
            (9, 10), (9, 11),
            (11, 12),
            (10, 13), (12, 13),
            (13, 14),
            (14, 15),
            (15, 16), (15, 17),
            (16, 18), (17, 18),
        ],
    ));

    out.push(ChainSpec::new(
        "eq25",
        vec![
            diff(Ratio::ONE, I, Delta),
            diff(r(2, 3), Hellinger, Delta),
            diff(r(1, 2), J, Delta),
            diff(r(1, 3), T, Delta),
            diff(Ratio::ONE, T, J),
            diff(r(2, 3), T, Hellinger),
            diff(r(2, 1), J, Hellinger),
            diff(r(1, 6), Psi, Delta),
            diff(r(1, 5), Psi, I),
            diff(r(2, 9), Psi, Hellinger),
            diff(r(1, 4), Psi, J),
            diff(r(1, 3), Psi, T),
        ],
        linear_edges(12),
    ));

    out.push(ChainSpec::new(
        "eq26",
        vec![
            diff(r(2, 3), Hellinger, Delta),
            diff(r(2, 1), Hellinger, I),
            diff(Ratio::ONE, T, J),
        ],
        linear_edges(3),
    ));

    // Unified chain: the edge set is the union of eq21, eq25 and eq26 over
    // the merged node list. The stacked display suggests bounding every
    // bracket member by its left neighbor, but that reading would add
    // (1/2)d:j-delta <= 2*d:h-i, which none of the constituents assert and
    // which fails at extreme likelihood ratios; the h-i branch enters from
    // (2/3)d:h-delta instead.
    out.push(ChainSpec::new(
        "eq27",
        vec![
            diff(Ratio::ONE, I, Delta),        // 0
            diff(r(2, 3), Hellinger, Delta),   // 1
            diff(r(1, 2), J, Delta),           // 2
            diff(r(1, 3), T, Delta),           // 3
            diff(r(2, 1), Hellinger, I),       // 4
            diff(r(1, 3), K0, Delta),          // 5
            diff(Ratio::ONE, T, J),            // 6
            diff(r(2, 3), T, Hellinger),       // 7
            diff(r(2, 1), J, Hellinger),       // 8
            diff(r(1, 2), K0, I),              // 9
            diff(r(2, 3), K0, Hellinger),      // 10
            diff(Ratio::ONE, K0, J),           // 11
            diff(r(1, 6), Psi, Delta),         // 12
            diff(r(1, 5), Psi, I),             // 13
            diff(r(2, 9), Psi, Hellinger),     // 14
            diff(r(1, 4), Psi, J),             // 15
            diff(r(1, 3), Psi, T),             // 16
            diff(r(1, 3), Psi, K0),            // 17
            diff(r(1, 9), F, Delta),           // 18
            diff(r(1, 8), F, I),               // 19
            diff(r(2, 15), F, Hellinger),      // 20
            diff(r(1, 7), F, J),               // 21
            diff(r(1, 6), F, T),               // 22
            diff(r(1, 6), F, K0),              // 23
            diff(r(1, 3), F, Psi),             // 24
        ],
        vec![
            (0, 1), (1, 2), (2, 3), (1, 4),
            (3, 5), (3, 6), (3, 8), (4, 5), (4, 6), (4, 8),
            (6, 7), (7, 8),
            (5, 9), (8, 9),
            (9, 10),
            (10, 11), (10, 12), (8, 12),
            (11, 13), (12, 13),
            (13, 14), (14, 15), (13, 15),
            (15, 16), (15, 17),
            (17, 18),
            (16, 19), (18, 19),
            (19, 20),
            (20, 21),
            (21, 22), (21, 23),
            (22, 24), (23, 24),
        ],
    ));

    // The six-node difference chain m1..m6.
    out.push(ChainSpec::new(
        "eq28",
        vec![
            diff(Ratio::ONE, Hellinger, Delta),
            diff(r(1, 2), K0, Delta),
            diff(Ratio::ONE, K0, Hellinger),
            diff(r(1, 4), Psi, Delta),
            diff(r(1, 2), Psi, K0),
            diff(r(1, 4), F, K0),
        ],
        linear_edges(6),
    ));

    // Encoded exactly as printed. The middle link (1/2)l:1... has no
    // supporting two-node bound and fails numerically; `verify` reports the
    // violations rather than repairing the chain.
    out.push(ChainSpec::new(
        "eq29",
        vec![
            l(Ratio::ONE, 1),
            l(r(1, 2), 6),
            diff(Ratio::ONE, K0, T),
            l(Ratio::ONE, 5),
        ],
        linear_edges(4),
    ));

    // Gap-variant chain; branching edge list of the eleven sharp two-node
    // bounds among lv:7..lv:15 and d:f-psi.
    out.push(ChainSpec::new(
        "eq30",
        vec![
            lv(Ratio::ONE, 7),         // 0
            lv(Ratio::ONE, 8),         // 1
            lv(Ratio::ONE, 9),         // 2
            lv(r(1, 3), 12),           // 3
            lv(r(1, 3), 13),           // 4
            lv(r(1, 3), 14),           // 5
            lv(r(1, 3), 15),           // 6
            diff(r(1, 2), F, Psi),     // 7
        ],
        vec![
            (0, 1), (0, 2),
            (1, 3), (1, 4),
            (3, 7), (4, 7),
            (1, 5), (1, 6),
            (2, 5), (2, 6),
            (5, 7),
        ],
    ));

    out.push(ChainSpec::new(
        "eq31",
        vec![l(Ratio::ONE, 5), ChainNode::one(r(1, 2048), MeasureId::Kt(2))],
        vec![(0, 1)],
    ));
    out.push(ChainSpec::new(
        "eq32",
        vec![l(Ratio::ONE, 4), ChainNode::one(r(1, 32768), MeasureId::Kt(3))],
        vec![(0, 1)],
    ));

    // Series relations among K0, K2, K3 and the base measures.
    out.push(ChainSpec::new(
        "eq34",
        vec![
            ChainNode {
                terms: vec![(r(1, 4), MeasureId::Base(Psi)), (Ratio::ONE, MeasureId::Base(Delta))],
            },
            ChainNode {
                terms: vec![(Ratio::ONE, MeasureId::Base(K0)), (r(1, 128), MeasureId::Kt(2))],
            },
            ChainNode {
                terms: vec![(r(8, 1), MeasureId::Base(T)), (r(3, 256), MeasureId::Kt(2))],
            },
        ],
        linear_edges(3),
    ));
    out.push(ChainSpec::new(
        "eq35",
        vec![
            ChainNode {
                terms: vec![(r(1, 2), MeasureId::Base(Psi)), (r(32, 1), MeasureId::Base(Hellinger))],
            },
            ChainNode {
                terms: vec![
                    (r(2, 1), MeasureId::Base(Delta)),
                    (r(4, 1), MeasureId::Base(K0)),
                    (r(1, 1024), MeasureId::Kt(3)),
                ],
            },
            ChainNode {
                terms: vec![(r(5, 1), MeasureId::Base(K0)), (r(1, 1024), MeasureId::Kt(3))],
            },
        ],
        linear_edges(3),
    ));

    // The eighteen sharp two-node bounds, each with its ratio-limit constant.
    let thm31: Vec<(ChainNode, ChainNode)> = vec![
        (diff(Ratio::ONE, T, Delta), diff(Ratio::ONE, K0, Delta)),
        (diff(Ratio::ONE, Hellinger, I), diff(r(1, 6), K0, Delta)),
        (diff(Ratio::ONE, K0, Delta), diff(r(3, 2), K0, I)),
        (diff(Ratio::ONE, J, Hellinger), diff(r(1, 4), K0, I)),
        (diff(Ratio::ONE, K0, I), diff(r(4, 3), K0, Hellinger)),
        (diff(Ratio::ONE, K0, Hellinger), diff(r(3, 2), K0, J)),
        (diff(Ratio::ONE, K0, Hellinger), diff(r(1, 4), Psi, Delta)),
        (diff(Ratio::ONE, K0, J), diff(r(1, 5), Psi, I)),
        (diff(Ratio::ONE, Psi, J), diff(r(4, 3), Psi, K0)),
        (diff(Ratio::ONE, Psi, K0), diff(r(1, 3), F, Delta)),
        (diff(Ratio::ONE, Psi, T), diff(r(3, 8), F, I)),
        (diff(Ratio::ONE, F, Delta), diff(r(9, 8), F, I)),
        (diff(Ratio::ONE, F, I), diff(r(16, 15), F, Hellinger)),
        (diff(Ratio::ONE, F, Hellinger), diff(r(15, 14), F, J)),
        (diff(Ratio::ONE, F, J), diff(r(7, 6), F, T)),
        (diff(Ratio::ONE, F, J), diff(r(7, 6), F, K0)),
        (diff(Ratio::ONE, F, T), diff(r(2, 1), F, Psi)),
        (diff(Ratio::ONE, F, K0), diff(r(2, 1), F, Psi)),
    ];
    out.push(edge_list_chain("thm31-edges", thm31));

    let thm41: Vec<(ChainNode, ChainNode)> = vec![
        (l(Ratio::ONE, 1), l(r(1, 2), 6)),
        (l(Ratio::ONE, 1), diff(r(3, 2), K0, T)),
        (diff(Ratio::ONE, K0, T), l(r(2, 3), 5)),
        (lv(Ratio::ONE, 7), lv(Ratio::ONE, 8)),
        (lv(Ratio::ONE, 7), lv(Ratio::ONE, 9)),
        (lv(Ratio::ONE, 8), lv(r(1, 3), 12)),
        (lv(Ratio::ONE, 8), lv(r(1, 3), 13)),
        (lv(Ratio::ONE, 12), diff(r(3, 2), F, Psi)),
        (lv(Ratio::ONE, 13), diff(r(3, 2), F, Psi)),
        (lv(Ratio::ONE, 8), lv(r(1, 3), 14)),
        (lv(Ratio::ONE, 8), lv(r(1, 3), 15)),
        (lv(Ratio::ONE, 9), lv(r(1, 3), 14)),
        (lv(Ratio::ONE, 9), lv(r(1, 3), 15)),
        (lv(Ratio::ONE, 14), diff(r(3, 2), F, Psi)),
    ];
    out.push(edge_list_chain("thm41-edges", thm41));

    out
}

/// Assemble disjoint two-node bounds into one chain spec, deduplicating
/// identical nodes.
fn edge_list_chain(name: &str, bounds: Vec<(ChainNode, ChainNode)>) -> ChainSpec {
    let mut nodes: Vec<ChainNode> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut intern = |node: ChainNode, nodes: &mut Vec<ChainNode>| -> usize {
        let key = node.label();
        *index.entry(key).or_insert_with(|| {
            nodes.push(node);
            nodes.len() - 1
        })
    };
    for (a, b) in bounds {
        let ia = intern(a, &mut nodes);
        let ib = intern(b, &mut nodes);
        edges.push((ia, ib));
    }
    ChainSpec::new(name, nodes, edges)
}

pub fn chain_by_name(name: &str) -> Option<ChainSpec> {
    builtin_chains().into_iter().find(|c| c.name == name)
}

/// One identity or advisory comparison in the identity suite.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub name: String,
    pub max_rel_dev: f64,
    pub tol: f64,
    /// Advisory rows (the as-printed gap formulas) report a verdict without
    /// being asserted.
    pub advisory: bool,
    pub pass: bool,
    pub note: String,
}

#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub trials: u64,
    pub seed: u64,
    pub tol: f64,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_asserted_pass(&self) -> bool {
        self.checks.iter().filter(|c| !c.advisory).all(|c| c.pass)
    }
}

/// Run the algebraic-identity suite over seeded random pairs: the six
/// B-to-difference identities, the series identity `(1/2)f = k0 + (1/4)k_t:1`,
/// the gap identities `l:2 = l:1`, `l:3 = 2*l:1`, closed form vs chain
/// difference for every gap measure, and (advisory) the as-printed gap
/// formulas with their match verdicts.
pub fn check_identities(trials: u64, dims: &[usize], seed: u64, tol: f64) -> IdentityReport {
    let mut sampler = PairSampler::new(dims, seed);
    let pairs: Vec<(Distribution, Distribution)> =
        (0..trials).map(|_| sampler.next_pair()).collect();

    type Pair = (Distribution, Distribution);
    type ValueFn = Box<dyn Fn(&Pair) -> f64 + Sync>;
    struct Check {
        name: String,
        lhs: ValueFn,
        rhs: ValueFn,
        /// Extra magnitude entering the relative-deviation denominator.
        /// Comparisons against a chain *difference* are conditioned by the
        /// size of the subtracted nodes, not by the (possibly much smaller)
        /// gap itself, so those checks scale by the node sum.
        scale: Option<ValueFn>,
        advisory: bool,
        note: String,
    }
    // Identity comparisons run through `closed_form`, which evaluates the
    // log-free difference measures by their product forms; the defining
    // sum-minus-sum route of `difference()` has a conditioning floor that
    // would drown a 1e-12 identity check near chance-close pairs.
    let val = |id: MeasureId| {
        move |pq: &Pair| divergences::closed_form(id, &pq.0, &pq.1).expect("catalog measure").value
    };
    let mut checks: Vec<Check> = Vec::new();
    let mut push = |name: &str, lhs: ValueFn, rhs: ValueFn, advisory: bool, note: &str| {
        checks.push(Check {
            name: name.to_string(),
            lhs,
            rhs,
            scale: None,
            advisory,
            note: note.to_string(),
        });
    };

    use BaseId::*;
    let d = |a, b| MeasureId::diff(a, b).unwrap();
    push(
        "eq33: (1/2)*f = k0 + (1/4)*k_t:1",
        Box::new({
            let f = val(MeasureId::Base(F));
            move |pq| 0.5 * f(pq)
        }),
        Box::new({
            let (k0, k1) = (val(MeasureId::Base(K0)), val(MeasureId::Kt(1)));
            move |pq| k0(pq) + 0.25 * k1(pq)
        }),
        false,
        "",
    );
    for (i, dm, c) in [
        (1u8, d(F, K0), 32.0),
        (2, d(Hellinger, Delta), 4.0),
        (3, d(K0, Hellinger), 8.0),
        (4, d(K0, Delta), 8.0),
        (5, d(Psi, K0), 16.0),
        (6, d(Psi, Delta), 16.0),
    ] {
        push(
            &format!("b{i} = {c}*{}", dm.name()),
            Box::new(val(MeasureId::B(i))),
            Box::new({
                let dv = val(dm);
                move |pq| c * dv(pq)
            }),
            false,
            "",
        );
    }
    push(
        "l:2 = l:1",
        Box::new(val(MeasureId::L(2))),
        Box::new(val(MeasureId::L(1))),
        false,
        "",
    );
    push(
        "l:3 = 2*l:1",
        Box::new(val(MeasureId::L(3))),
        Box::new({
            let l1 = val(MeasureId::L(1));
            move |pq| 2.0 * l1(pq)
        }),
        false,
        "",
    );
    let node_scale = |k: u8| {
        let (j, i) = divergences::l_chain_pair(k).unwrap();
        move |pq: &Pair| {
            divergences::chain_node(j, &pq.0, &pq.1).unwrap()
                + divergences::chain_node(i, &pq.0, &pq.1).unwrap()
        }
    };
    for k in 1..=15u8 {
        checks.push(Check {
            name: format!("l:{k} closed form = chain difference"),
            lhs: Box::new(move |pq: &Pair| {
                divergences::closed_form(MeasureId::L(k), &pq.0, &pq.1).unwrap().value
            }),
            rhs: Box::new(move |pq: &Pair| {
                divergences::l_measure(k, &pq.0, &pq.1).unwrap().value
            }),
            scale: Some(Box::new(node_scale(k))),
            advisory: false,
            note: String::new(),
        });
    }
    for k in [1u8, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15] {
        let expected = l_printed_matches_chain(k).unwrap();
        checks.push(Check {
            name: format!("l:{k} as-printed formula vs chain difference"),
            lhs: Box::new(move |pq: &Pair| l_printed_form(k, &pq.0, &pq.1).unwrap()),
            rhs: Box::new(move |pq: &Pair| {
                divergences::l_measure(k, &pq.0, &pq.1).unwrap().value
            }),
            scale: Some(Box::new(node_scale(k))),
            advisory: true,
            note: (if expected { "expected: match" } else { "expected: mismatch (source erratum)" })
                .to_string(),
        });
    }

    let devs: Vec<f64> = checks
        .par_iter()
        .map(|c| {
            pairs
                .iter()
                .map(|pq| {
                    let (a, b) = ((c.lhs)(pq), (c.rhs)(pq));
                    let extra = c.scale.as_ref().map_or(0.0, |s| s(pq));
                    (a - b).abs() / a.abs().max(b.abs()).max(extra).max(1e-300)
                })
                .fold(0.0, f64::max)
        })
        .collect();

    let checks = checks
        .into_iter()
        .zip(devs)
        .map(|(c, max_rel_dev)| {
            let matched = max_rel_dev <= tol;
            let pass = c.advisory || matched;
            let note = if c.advisory {
                let verdict = if matched { "match" } else { "MISMATCH" };
                format!("verdict: {verdict}; {}", c.note)
            } else {
                c.note
            };
            IdentityCheck { name: c.name, max_rel_dev, tol, advisory: c.advisory, pass, note }
        })
        .collect();

    IdentityReport { trials, seed, tol, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_chains_have_expected_names_and_validate() {
        let names: Vec<String> = builtin_chains().iter().map(|c| c.name.clone()).collect();
        assert_eq!(
            names,
            vec![
                "eq15", "eq21", "eq25", "eq26", "eq27", "eq28", "eq29", "eq30", "eq31", "eq32",
                "eq34", "eq35", "thm31-edges", "thm41-edges"
            ]
        );
    }

    #[test]
    fn chain15_nodes_match_the_stated_list() {
        let c = chain_by_name("eq15").unwrap();
        let labels: Vec<String> = c.nodes.iter().map(|n| n.label()).collect();
        assert_eq!(
            labels,
            vec!["1/4*delta", "i", "hellinger", "1/8*j", "t", "1/8*k0", "1/16*psi", "1/16*f"]
        );
    }

    #[test]
    fn chain28_first_edge_is_the_stated_bound() {
        let c = chain_by_name("eq28").unwrap();
        assert_eq!(c.nodes[c.edges[0].0].label(), "d:h-delta");
        assert_eq!(c.nodes[c.edges[0].1].label(), "1/2*d:k0-delta");
    }

    #[test]
    fn chain30_contains_the_l14_bound() {
        let c = chain_by_name("eq30").unwrap();
        let has = c.edges.iter().any(|&(a, b)| {
            c.nodes[a].label() == "1/3*lv:14" && c.nodes[b].label() == "1/2*d:f-psi"
        });
        assert!(has);
    }

    #[test]
    fn verify_is_deterministic() {
        let c = chain_by_name("eq28").unwrap();
        let a = run_chain(&c, 200, &[2, 5], 11, 1e-10);
        let b = run_chain(&c, 200, &[2, 5], 11, 1e-10);
        assert_eq!(a.violations.len(), b.violations.len());
        for (x, y) in a.edges.iter().zip(&b.edges) {
            assert_eq!(x.worst_slack, y.worst_slack);
            assert_eq!(x.worst_slack_trial, y.worst_slack_trial);
        }
    }

    #[test]
    fn clean_chains_verify_at_small_scale() {
        for name in ["eq15", "eq28", "eq31", "eq32", "eq34", "eq35"] {
            let c = chain_by_name(name).unwrap();
            let v = verify(&c, 500, &[2, 3, 7], 5, 1e-10);
            assert!(v.is_empty(), "{name}: {:?}", v.first());
        }
    }

    #[test]
    fn reversed_edge_is_caught() {
        let c = chain_by_name("eq28").unwrap();
        let reversed = ChainSpec::new(
            "eq28-reversed",
            c.nodes.clone(),
            c.edges.iter().map(|&(a, b)| (b, a)).collect(),
        );
        let v = verify(&reversed, 500, &[2, 3], 3, 1e-10);
        assert!(!v.is_empty());
    }

    #[test]
    fn eq29_middle_link_reports_violations() {
        // The printed middle link is false; the verifier must say so.
        let c = chain_by_name("eq29").unwrap();
        let v = verify(&c, 300, &[2, 4], 17, 1e-10);
        assert!(v.iter().any(|r| r.edge.0 == "1/2*l:6"));
        assert!(v.iter().all(|r| r.edge.0 == "1/2*l:6"), "only the middle link may fail");
    }

    #[test]
    fn transitive_closure_of_eq28_also_verifies() {
        let c = chain_by_name("eq28").unwrap();
        let mut edges = c.edges.clone();
        for i in 0..c.nodes.len() {
            for j in i + 2..c.nodes.len() {
                edges.push((i, j));
            }
        }
        let closed = ChainSpec::new("eq28-transitive", c.nodes.clone(), edges);
        assert!(verify(&closed, 300, &[2, 6], 23, 1e-10).is_empty());
    }

    #[test]
    fn identity_suite_passes_and_flags_printed_errata() {
        let rep = check_identities(400, &[2, 3, 9], 77, 1e-12);
        assert!(rep.all_asserted_pass(), "{:#?}", rep.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>());
        for k in [1u8, 4, 5] {
            let c = rep
                .checks
                .iter()
                .find(|c| c.name == format!("l:{k} as-printed formula vs chain difference"))
                .unwrap();
            assert!(c.note.contains("verdict: match"), "{:?}", c);
        }
        for k in [6u8, 7, 8, 9, 10, 11, 12, 13, 14, 15] {
            let c = rep
                .checks
                .iter()
                .find(|c| c.name == format!("l:{k} as-printed formula vs chain difference"))
                .unwrap();
            assert!(c.note.contains("verdict: MISMATCH"), "{:?}", c);
        }
    }

    #[test]
    #[should_panic(expected = "cycle")]
    fn cyclic_chain_is_rejected() {
        let c = chain_by_name("eq31").unwrap();
        ChainSpec::new("cycle", c.nodes.clone(), vec![(0, 1), (1, 0)]);
    }
}
