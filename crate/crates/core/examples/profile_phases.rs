use latpack::polytope::{difference_body, from_halfspaces};
use latpack::search::*;
use latpack::geom::{vec3, Halfspace};
use std::time::Instant;

fn main() {
    let hs = vec![
        Halfspace::new(vec3(1.0, 1.0, 1.0), 1.0),
        Halfspace::new(vec3(-1.0, -1.0, 1.0), 1.0),
        Halfspace::new(vec3(-1.0, 1.0, -1.0), 1.0),
        Halfspace::new(vec3(1.0, -1.0, -1.0), 1.0),
    ];
    let p = from_halfspaces(&hs).unwrap();
    let t0 = Instant::now();
    let p0 = difference_body(&p).unwrap();
    println!("difference body: {:?}  n={}", t0.elapsed(), p0.n_facets());

    let t0 = Instant::now();
    let ts1 = build_triple_set(&p0, -1);
    println!("triple set sigma=-1: {:?} triples={}", t0.elapsed(), ts1.triple_count());
    let t0 = Instant::now();
    let ts2 = build_triple_set(&p0, 1);
    println!("triple set sigma=+1: {:?} triples={}", t0.elapsed(), ts2.triple_count());

    let mut sixes: Vec<[usize; 6]> = Vec::new();
    for_each_six_tuple(&p0, &ts2, |s| sixes.push(*s));
    println!("six tuples (sigma+): {}", sixes.len());
    let mut sixes1: Vec<[usize; 6]> = Vec::new();
    for_each_six_tuple(&p0, &ts1, |s| sixes1.push(*s));
    println!("six tuples (sigma-): {}", sixes1.len());

    let t0 = Instant::now();
    let feas2: Vec<&[usize; 6]> = sixes.iter().filter(|s| selection_feasible(&p0, &s[..], TestSetKind::Two)).collect();
    println!("S0 kind2 over {}: {:?} feasible={}", sixes.len(), t0.elapsed(), feas2.len());

    let t0 = Instant::now();
    let feas1 = sixes1.iter().filter(|s| selection_feasible(&p0, &s[..], TestSetKind::One)).count();
    println!("S0 kind1 over {}: {:?} feasible={}", sixes1.len(), t0.elapsed(), feas1);

    // R1+R2+R3 on the kind-2 feasible ones (case II)
    let t0 = Instant::now();
    let mut fams = 0;
    let mut subs = 0;
    for s in &feas2 {
        if let Parameterized::Family(f) = parameterize_selection(&p0, &s[..], TestSetKind::Two, None) {
            fams += 1;
            let t1 = Instant::now();
            let cs = critical_subspaces(&f);
            let _ = t1;
            subs += cs.len();
            for sub in &cs {
                let _ = admissible_in_subspace(&p0, sub, SearchCase::II, &s[..], false);
            }
        }
    }
    println!("caseII R1-R3 on {} feasible: {:?} fams={} subs={}", feas2.len(), t0.elapsed(), fams, subs);

    // l7 expansion stats
    let t0 = Instant::now();
    let mut n7 = 0u64;
    let mut feas7 = 0u64;
    for s in &feas2 {
        let mut sevenths: Vec<usize> = ts2.completions(s[0], s[3]).to_vec();
        sevenths.retain(|&l7| ts2.contains(s[1], s[4], l7) && ts2.contains(s[2], s[5], l7));
        for l7 in sevenths {
            n7 += 1;
            let sel7 = [s[0], s[1], s[2], s[3], s[4], s[5], l7];
            if selection_feasible(&p0, &sel7, TestSetKind::Three) {
                feas7 += 1;
            }
        }
    }
    println!("l7 expansion: {:?} candidates={} feasible={}", t0.elapsed(), n7, feas7);
}
