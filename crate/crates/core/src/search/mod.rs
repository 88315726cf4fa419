//! The packing search: difference body, triple-set pruning, selection
//! enumeration, parameterization, critical subspaces and admissibility, and
//! the minimum-determinant sweep over the four cases.

mod admiss;
mod param;
mod select;
mod testset;
mod triples;

pub use admiss::{
    admissible_in_subspace, check_admissible, critical_subspaces, verify_admissible_bruteforce,
    Candidate, MatrixFamily, SubspaceOutcome,
};
pub use param::{case4_adjust, contact_points, det_polynomial, parameterize_selection, ParamFamily, Parameterized};
pub use select::{
    basis_order_images, for_each_selection, for_each_six_tuple, is_canonical_six_tuple,
    selection_feasible, selection_lp, Selection,
};
pub use testset::{SearchCase, TestSetKind};
pub use triples::{build_triple_set, find_seed_facet, triple_certified, TripleSet};

use crate::geom::{Mat3, Vec3};
use crate::lp::{lp_feasible, LpOutcome};
use crate::polytope::{difference_body, Polytope, PolytopeError};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("no admissible lattice found; cases run: {0:?}, counts: {1:?}")]
    NoLatticeFound(Vec<&'static str>, SearchCounts),
}

#[derive(Debug, Clone, Default)]
pub struct SearchCounts {
    pub selections_enumerated: u64,
    pub pruned_by_g: u64,
    pub pruned_by_s0: u64,
    pub rank_skipped: u64,
    pub subspaces_checked: u64,
    pub deferred_to_iii: u64,
}

impl SearchCounts {
    fn absorb(&mut self, o: &SearchCounts) {
        self.selections_enumerated += o.selections_enumerated;
        self.pruned_by_s0 += o.pruned_by_s0;
        self.rank_skipped += o.rank_skipped;
        self.subspaces_checked += o.subspaces_checked;
        self.deferred_to_iii += o.deferred_to_iii;
    }
}

#[derive(Clone)]
pub struct SearchOptions {
    /// Cases to run; the result is only guaranteed optimal with all four.
    pub cases: Vec<SearchCase>,
    /// Replace the deferred-exclusion shortcut by the per-facet scan.
    pub exhaustive_exclusions: bool,
    /// Worker threads; 0 uses the default pool.
    pub threads: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            cases: SearchCase::ALL.to_vec(),
            exhaustive_exclusions: false,
            threads: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PackingResult {
    /// Lattice packing density of the input polytope.
    pub density: f64,
    /// Critical determinant of the difference body, equal to the determinant
    /// of the returned basis.
    pub critical_determinant: f64,
    /// Basis of the densest packing lattice of the input polytope.
    pub basis: Mat3,
    pub case: SearchCase,
    /// Facet indices of the difference body selected for the test vectors.
    pub selection: Vec<usize>,
    /// Test-set positions on the boundary of the difference body.
    pub contact_points: Vec<Vec3>,
    /// Set when an exclusion point sits within tolerance of the boundary.
    pub marginal: bool,
    pub counts: SearchCounts,
    pub volume: f64,
    pub cases_run: Vec<SearchCase>,
}

struct Scored {
    det: f64,
    case: SearchCase,
    selection: Vec<usize>,
    sub_idx: usize,
    cand: Candidate,
}

/// Runs the full search and returns the packing result together with the
/// centered input polytope and its difference body.
pub fn densest_packing_full(
    p: &Polytope,
    opts: &SearchOptions,
) -> Result<(PackingResult, Polytope, Polytope), SearchError> {
    if opts.threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .expect("thread pool");
        pool.install(|| densest_packing_inner(p, opts))
    } else {
        densest_packing_inner(p, opts)
    }
}

pub fn densest_packing(p: &Polytope, opts: &SearchOptions) -> Result<PackingResult, SearchError> {
    densest_packing_full(p, opts).map(|(r, _, _)| r)
}

fn densest_packing_inner(
    p: &Polytope,
    opts: &SearchOptions,
) -> Result<(PackingResult, Polytope, Polytope), SearchError> {
    let centered = p.translated(Vec3::ZERO - p.centroid());
    let p0 = difference_body(&centered)?;
    let volume = centered.volume();
    let n = p0.n_facets() as u64;
    let l1_reps = (0..p0.n_facets())
        .filter(|&i| p0.antipode[i] >= i)
        .count() as u64;

    let mut counts = SearchCounts::default();
    let mut scored: Vec<Scored> = Vec::new();
    let mut tuple_space: u64 = 0;

    let run_i = opts.cases.contains(&SearchCase::I);
    let run_ii = opts.cases.contains(&SearchCase::II);
    let run_iii = opts.cases.contains(&SearchCase::III);
    let run_iv = opts.cases.contains(&SearchCase::IV);

    if run_i {
        let ts = build_triple_set(&p0, -1);
        let mut sixes: Vec<[usize; 6]> = Vec::new();
        for_each_six_tuple(&p0, &ts, |s| {
            if select::is_canonical_six_tuple(&p0, s, -1) {
                sixes.push(*s);
            }
        });
        let results: Vec<(Vec<Scored>, SearchCounts)> = sixes
            .par_iter()
            .map(|sel| process_case6(&p0, sel, SearchCase::I, opts))
            .collect();
        for (s, c) in results {
            scored.extend(s);
            counts.absorb(&c);
        }
        tuple_space += l1_reps * n.pow(5);
    }

    if run_ii || run_iii || run_iv {
        let ts = build_triple_set(&p0, 1);
        let mut sixes: Vec<[usize; 6]> = Vec::new();
        for_each_six_tuple(&p0, &ts, |s| {
            if select::is_canonical_six_tuple(&p0, s, 1) {
                sixes.push(*s);
            }
        });
        let results: Vec<(Vec<Scored>, SearchCounts)> = sixes
            .par_iter()
            .map(|sel| process_sigma_plus(&p0, &ts, sel, run_ii, run_iii, run_iv, opts))
            .collect();
        for (s, c) in results {
            scored.extend(s);
            counts.absorb(&c);
        }
        if run_ii {
            tuple_space += l1_reps * n.pow(5);
        }
        if run_iii {
            tuple_space += l1_reps * n.pow(6);
        }
        if run_iv {
            tuple_space += l1_reps * n.pow(6);
        }
    }

    counts.pruned_by_g = tuple_space.saturating_sub(counts.selections_enumerated);

    // deterministic minimum: smallest determinant, ties resolved by case
    // order then selection order
    let dmin = scored
        .iter()
        .map(|s| s.det)
        .fold(f64::INFINITY, f64::min);
    let mut finalists: Vec<&Scored> = scored
        .iter()
        .filter(|s| s.det <= dmin * (1.0 + 1e-9))
        .collect();
    finalists.sort_by(|a, b| {
        (a.case, &a.selection, a.sub_idx).cmp(&(b.case, &b.selection, b.sub_idx))
    });
    // the winner must also survive the exhaustive lattice-point oracle
    let winner = finalists
        .iter()
        .find(|s| verify_admissible_bruteforce(&p0, &s.cand.basis));
    let Some(win) = winner else {
        let labels = opts.cases.iter().map(|c| c.label()).collect();
        return Err(SearchError::NoLatticeFound(labels, counts));
    };

    let result = PackingResult {
        density: volume / win.det,
        critical_determinant: win.det,
        basis: win.cand.basis,
        case: win.case,
        selection: win.selection.clone(),
        contact_points: win.cand.contacts.clone(),
        marginal: win.cand.marginal,
        counts,
        volume,
        cases_run: opts.cases.clone(),
    };
    Ok((result, centered, p0))
}

/// One 6-facet selection through steps R0..R3 for case I or II.
fn process_case6(
    p0: &Polytope,
    sel: &[usize; 6],
    case: SearchCase,
    opts: &SearchOptions,
) -> (Vec<Scored>, SearchCounts) {
    let mut counts = SearchCounts {
        selections_enumerated: 1,
        ..Default::default()
    };
    let kind = case.kind();
    if !select::selection_feasible(p0, sel, kind) {
        counts.pruned_by_s0 = 1;
        return (vec![], counts);
    }
    let scored = run_r1_to_r3(p0, sel, case, None, opts, &mut counts);
    (scored, counts)
}

/// One 6-tuple through case II and, with the seventh slot expanded, cases
/// III and IV. The six-row feasibility system is shared.
fn process_sigma_plus(
    p0: &Polytope,
    ts: &TripleSet,
    sel6: &[usize; 6],
    run_ii: bool,
    run_iii: bool,
    run_iv: bool,
    opts: &SearchOptions,
) -> (Vec<Scored>, SearchCounts) {
    let mut counts = SearchCounts::default();
    let mut scored = Vec::new();
    let n = p0.n_facets() as u64;

    let prefix_feasible = select::selection_feasible(p0, sel6, TestSetKind::Two);

    if run_ii {
        counts.selections_enumerated += 1;
        if !prefix_feasible {
            counts.pruned_by_s0 += 1;
        } else {
            scored.extend(run_r1_to_r3(p0, sel6, SearchCase::II, None, opts, &mut counts));
        }
    }

    let k7_cases = (run_iii as u64) + (run_iv as u64);
    if k7_cases > 0 {
        if !prefix_feasible {
            // every seventh-slot extension inherits the infeasibility
            counts.selections_enumerated += k7_cases * n;
            counts.pruned_by_s0 += k7_cases * n;
        } else {
            // the relations u7 = u1 + u4 = u2 + u5 = u3 + u6 confine the
            // seventh facet to the common triple-set completions
            let mut sevenths: Vec<usize> = ts.completions(sel6[0], sel6[3]).to_vec();
            sevenths.retain(|&l7| {
                ts.contains(sel6[1], sel6[4], l7) && ts.contains(sel6[2], sel6[5], l7)
            });
            counts.selections_enumerated += k7_cases * sevenths.len() as u64;
            for l7 in sevenths {
                let sel7 = [sel6[0], sel6[1], sel6[2], sel6[3], sel6[4], sel6[5], l7];
                if !select::selection_feasible(p0, &sel7, TestSetKind::Three) {
                    counts.pruned_by_s0 += k7_cases;
                    continue;
                }
                if run_iii {
                    scored.extend(run_r1_to_r3(
                        p0,
                        &sel7,
                        SearchCase::III,
                        None,
                        opts,
                        &mut counts,
                    ));
                }
                if run_iv {
                    // the adjustment is tied to slots 1, 2 and 6, so all six
                    // basis orderings of this selection are candidates
                    let mut seen: Vec<[usize; 7]> = Vec::new();
                    for img6 in select::basis_order_images(sel6) {
                        let img7 = [img6[0], img6[1], img6[2], img6[3], img6[4], img6[5], l7];
                        if seen.contains(&img7) {
                            continue;
                        }
                        seen.push(img7);
                        match case4_adjust(p0, &img7) {
                            Some(h6) => scored.extend(run_r1_to_r3(
                                p0,
                                &img7,
                                SearchCase::IV,
                                Some(h6),
                                opts,
                                &mut counts,
                            )),
                            None => counts.rank_skipped += 1,
                        }
                    }
                }
            }
        }
    }
    (scored, counts)
}

fn run_r1_to_r3(
    p0: &Polytope,
    sel: &[usize],
    case: SearchCase,
    row6: Option<crate::geom::Halfspace>,
    opts: &SearchOptions,
    counts: &mut SearchCounts,
) -> Vec<Scored> {
    let fam = match parameterize_selection(p0, sel, case.kind(), row6) {
        Parameterized::Family(f) => f,
        Parameterized::RankDeficient => {
            counts.rank_skipped += 1;
            return vec![];
        }
    };
    let mut out = Vec::new();
    for (sub_idx, sub) in critical_subspaces(&fam).into_iter().enumerate() {
        counts.subspaces_checked += 1;
        let (cand, outcome) =
            admissible_in_subspace(p0, &sub, case, sel, opts.exhaustive_exclusions);
        if outcome == SubspaceOutcome::DeferredToIII {
            counts.deferred_to_iii += 1;
        }
        if let Some(c) = cand {
            out.push(Scored {
                det: c.det,
                case,
                selection: sel.to_vec(),
                sub_idx,
                cand: c,
            });
        }
    }
    out
}

/// Lattice points `W m` for `m` in the centered integer box of the given
/// radius, in deterministic order.
pub fn lattice_shell(w: &Mat3, shells: i64) -> Vec<Vec3> {
    let mut out = Vec::new();
    for mx in -shells..=shells {
        for my in -shells..=shells {
            for mz in -shells..=shells {
                out.push(w.col[0] * mx as f64 + w.col[1] * my as f64 + w.col[2] * mz as f64);
            }
        }
    }
    out
}

/// Quick feasibility probe used by tests: is there any admissible selection
/// at all for a case (diagnostics only).
pub fn any_feasible_selection(p0: &Polytope, case: SearchCase) -> bool {
    let ts = build_triple_set(&p0.clone(), case.kind().sigma());
    let mut found = false;
    for_each_selection(p0, &ts, case, |s| {
        if !found {
            found = matches!(
                lp_feasible(&selection_lp(p0, &s.facets, case.kind())),
                LpOutcome::Feasible(_)
            );
        }
    });
    found
}
