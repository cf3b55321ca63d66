use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shg::coref::*;
use shg::{Hyperedge, Store};

fn h(s: &str) -> Hyperedge {
    s.parse().unwrap()
}

fn store(edges: &[String]) -> Store {
    let mut s = Store::new();
    for e in edges {
        s.add(h(e));
    }
    s
}

/// Degree and deep degree recomputed from the top-level edges alone.
struct Oracle {
    containers: BTreeMap<Hyperedge, BTreeSet<Hyperedge>>,
}

impl Oracle {
    fn new(top: &[String]) -> Oracle {
        fn walk(e: &Hyperedge, out: &mut BTreeSet<Hyperedge>) {
            out.insert(e.clone());
            e.elements().iter().for_each(|x| walk(x, out));
        }
        let mut all = BTreeSet::new();
        top.iter().for_each(|t| walk(&h(t), &mut all));
        let mut containers: BTreeMap<Hyperedge, BTreeSet<Hyperedge>> = all.iter().map(|e| (e.clone(), BTreeSet::new())).collect();
        for x in &all {
            for el in x.elements() {
                containers.get_mut(el).unwrap().insert(x.clone());
            }
        }
        Oracle { containers }
    }

    fn degree(&self, e: &Hyperedge) -> usize {
        self.containers.get(e).map(|d| d.iter().map(|x| x.len() - 1).sum()).unwrap_or(0)
    }

    fn deep_degree(&self, e: &Hyperedge) -> usize {
        let Some(start) = self.containers.get(e) else { return 0 };
        let mut seen = start.clone();
        let mut todo: Vec<Hyperedge> = start.iter().cloned().collect();
        while let Some(x) = todo.pop() {
            for y in &self.containers[&x] {
                if seen.insert(y.clone()) {
                    todo.push(y.clone());
                }
            }
        }
        seen.iter().map(|x| x.len() - 1).sum()
    }
}

/// `n` distinct one-argument relations over `e`.
fn mentions(e: &str, tag: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("({tag}{i}/P {e})")).collect()
}

const BARACK: &str = "(+/B.am barack/C obama/C)";
const PRESIDENT_BARACK: &str = "(+/B.am president/C (+/B.am barack/C obama/C))";
const PRESIDENT: &str = "(+/B.am president/C obama/C)";
const MICHELLE: &str = "(+/B.am michelle/C obama/C)";
const LADY_MICHELLE: &str = "(+/B.am (first/M lady/C) (+/B.am michelle/C obama/C))";
const MR: &str = "(+/B.am mr/C obama/C)";

fn obama_fixture() -> Vec<String> {
    let mut top = Vec::new();
    top.extend(mentions(BARACK, "said", 12));
    top.extend(mentions(PRESIDENT_BARACK, "signed", 3));
    top.extend(mentions(PRESIDENT, "vetoed", 4));
    top.extend(mentions(MICHELLE, "visited", 3));
    top.extend(mentions(LADY_MICHELLE, "opened", 1));
    top.extend(mentions(MR, "met", 2));
    top.extend(mentions("obama/C", "spoke", 2));
    top
}

#[test]
fn seed_examples() {
    assert_eq!(seed_concepts(&store(&[BARACK.into()])), [h("obama/C")]);
    assert!(seed_concepts(&store(&["(is/P.sc berlin/C nice/C)".into()])).is_empty());
    assert_eq!(seed_concepts(&store(&["(+/B.am tennis/C ball/C)".into()])), [h("ball/C")]);
    // the main argument sits wherever the role string puts it
    assert_eq!(seed_concepts(&store(&["(of/B.ma capital/C germany/C)".into(), "(+/B.ma ball/C tennis/C)".into()])), [h("ball/C")]);
}

#[test]
fn cooccurrence_examples() {
    let s = store(&[BARACK.into(), PRESIDENT_BARACK.into()]);
    let g = cooccurrence_graph(&s, &h("obama/C"));
    assert_eq!(g[&h("barack/C")], BTreeSet::from([h("president/C")]));
    assert_eq!(g[&h("president/C")], BTreeSet::from([h("barack/C")]));

    let g = cooccurrence_graph(&store(&[MR.into()]), &h("obama/C"));
    assert_eq!(g.len(), 1);
    assert!(g[&h("mr/C")].is_empty());
}

#[test]
fn disjoint_pairs_give_separate_components() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let k = rng.gen_range(1..6);
        let pairs: Vec<(String, String)> = (0..k).map(|i| (format!("p{i}"), format!("q{i}"))).collect();
        let top: Vec<String> = pairs.iter().map(|(a, b)| format!("(+/B.am {a}/C (+/B.am {b}/C seed/C))")).collect();
        let g = cooccurrence_graph(&store(&top), &h("seed/C"));
        let mut want: BTreeMap<Hyperedge, BTreeSet<Hyperedge>> = BTreeMap::new();
        for (a, b) in &pairs {
            let (a, b) = (h(&format!("{a}/C")), h(&format!("{b}/C")));
            want.insert(a.clone(), BTreeSet::from([b.clone()]));
            want.insert(b, BTreeSet::from([a]));
        }
        assert_eq!(g, want);
        assert_eq!(maximal_cliques(&g).len(), k);
    }
}

#[test]
fn obama_sets() {
    check_obama_sets();
}

pub fn check_obama_sets() {
    let top = obama_fixture();
    let s = store(&top);
    let oracle = Oracle::new(&top);
    let seed = h("obama/C");
    let sets = coref_sets(&s, &seed, &CorefParams::default()).unwrap();
    let find = |e: &str| sets.iter().position(|c| c.members.contains(&h(e))).unwrap();

    let barack = find(BARACK);
    assert_eq!(find(PRESIDENT_BARACK), barack);
    assert_eq!(find(PRESIDENT), barack);
    let michelle = find(MICHELLE);
    assert_eq!(find(LADY_MICHELLE), michelle);
    assert_ne!(barack, michelle);
    let mr = find(MR);
    assert!(mr != barack && mr != michelle);
    assert_eq!(sets[mr].members, [h(MR)]);
    assert_eq!(sets.len(), 3);

    // degree mass and labels from the oracle
    let total: usize = compounds_of(&s, &seed).iter().map(|c| oracle.degree(c)).sum();
    for set in &sets {
        let mass: usize = set.members.iter().map(|m| oracle.degree(m)).sum();
        assert_eq!(set.total_degree, mass);
        assert!((set.p - mass as f64 / total as f64).abs() < 1e-12);
        let top_degree = set.members.iter().map(|m| oracle.degree(m)).max().unwrap();
        assert_eq!(oracle.degree(&set.label), top_degree);
    }
    assert_eq!(sets[barack].label, h(BARACK));
    assert_eq!(sets[michelle].label, h(MICHELLE));
    assert!(sets.iter().map(|c| c.p).sum::<f64>() <= 1.0 + 1e-12);

    let a = assign_seed(&s, &seed, &sets, &CorefParams::default());
    assert_eq!((a.degree, a.deep_degree), (oracle.degree(&seed), oracle.deep_degree(&seed)));
    let best = sets[barack].p;
    assert_eq!(a.assigned.is_some(), best > 0.7 && a.ratio().unwrap() > 0.05);
}

#[test]
fn dominant_set_is_assigned() {
    check_dominant_set_is_assigned();
}

pub fn check_dominant_set_is_assigned() {
    let a = "(+/B.am a/C s/C)";
    let b = "(+/B.am b/C s/C)";
    let mut top = mentions(a, "x", 9);
    top.extend(mentions(b, "y", 1));
    // wrappers that widen the seed's neighbourhood without touching its degree
    top.extend((0..3).map(|i| format!("(says/P.so bob/C (x{i}/P {a}))")));
    let s = store(&top);
    let oracle = Oracle::new(&top);
    let seed = h("s/C");
    let (d, dd) = (oracle.degree(&seed), oracle.deep_degree(&seed));
    assert_eq!((d, dd), (4, 20));

    let r = resolve(&s, &seed, &CorefParams::default()).unwrap();
    let k = r.sets.iter().position(|c| c.members == [h(a)]).unwrap();
    assert!((r.sets[k].p - 0.9).abs() < 1e-12);
    assert_eq!(r.assignment.assigned, Some(k));
    assert!((r.assignment.ratio().unwrap() - 0.2).abs() < 1e-12);
}

#[test]
fn twin_sets_stay_ambiguous() {
    check_twin_sets_stay_ambiguous();
}

pub fn check_twin_sets_stay_ambiguous() {
    let north = "(+/B.am north/C korea/C)";
    let south = "(+/B.am south/C korea/C)";
    let mut top = mentions(north, "n", 5);
    top.extend(mentions(south, "s", 5));
    top.extend(mentions("korea/C", "k", 3));
    let s = store(&top);
    let seed = h("korea/C");
    let r = resolve(&s, &seed, &CorefParams::default()).unwrap();
    assert_eq!(r.sets.len(), 2);
    assert!(r.sets.iter().all(|c| (c.p - 0.5).abs() < 1e-12));
    assert!(r.assignment.ratio().unwrap() > 0.05);
    assert_eq!(r.assignment.assigned, None);
    // only the probability threshold holds it back
    let loose = CorefParams { theta: 0.4, ..Default::default() };
    assert!(resolve(&s, &seed, &loose).unwrap().assignment.assigned.is_some());
}

#[test]
fn seed_never_alone_stays_unassigned() {
    check_seed_never_alone_stays_unassigned();
}

pub fn check_seed_never_alone_stays_unassigned() {
    let al = "(+/B.am al/C qaida/C)";
    let top = mentions(al, "m", 100);
    let s = store(&top);
    let oracle = Oracle::new(&top);
    let seed = h("qaida/C");
    let r = resolve(&s, &seed, &CorefParams::default()).unwrap();
    assert_eq!(r.sets.len(), 1);
    assert_eq!(r.sets[0].p, 1.0);
    let ratio = oracle.degree(&seed) as f64 / oracle.deep_degree(&seed) as f64;
    assert!((ratio - 2.0 / 102.0).abs() < 1e-12);
    assert!((r.assignment.ratio().unwrap() - ratio).abs() < 1e-12);
    assert_eq!(r.assignment.assigned, None);

    // no neighbourhood at all: the ratio is undefined
    let lone = store(&["(is/P.sc qaida/C bad/C)".into()]);
    let a = assign_seed(&lone, &h("nothing/C"), &[], &CorefParams::default());
    assert_eq!((a.ratio(), a.assigned), (None, None));
}

#[test]
fn label_rules() {
    let top: Vec<String> = [mentions(BARACK, "a", 3), mentions(PRESIDENT_BARACK, "b", 1)].concat();
    let s = store(&top);
    let members = [h(PRESIDENT_BARACK), h(BARACK)];
    assert_eq!(coref_label(&members, &s).unwrap(), h(BARACK));
    assert_eq!(coref_label(&[h(MR)], &s).unwrap(), h(MR));
    assert_eq!(coref_label(&[], &s), Err(CorefError::EmptySet));

    // equal degree: fewer atoms wins, then notation order
    // the inner compound also gains 2 from sitting inside the outer one
    let top: Vec<String> = [mentions(BARACK, "a", 1), mentions(PRESIDENT_BARACK, "b", 3)].concat();
    let s = store(&top);
    assert_eq!(s.degree(&h(BARACK)), s.degree(&h(PRESIDENT_BARACK)));
    assert_eq!(coref_label(&members, &s).unwrap(), h(BARACK));
    let top: Vec<String> = [mentions(MR, "a", 1), mentions(PRESIDENT, "b", 1)].concat();
    let s = store(&top);
    assert_eq!(coref_label(&[h(PRESIDENT), h(MR)], &s).unwrap(), h(MR));
}

#[test]
fn graph_over_the_cap_is_an_error() {
    let top: Vec<String> = (0..5).map(|i| format!("(+/B.am a{i}/C s/C)")).collect();
    let params = CorefParams { max_nodes: 4, ..Default::default() };
    assert!(matches!(coref_sets(&store(&top), &h("s/C"), &params), Err(CorefError::TooLarge { nodes: 5, .. })));
}

/// Compounds of `seed/C` over a small auxiliary pool, each mentioned a random
/// number of times, plus some bare mentions of the seed.
fn random_fixture(rng: &mut impl Rng) -> Vec<String> {
    let pool = ["a", "b", "c", "d", "e", "f"];
    let mut top = Vec::new();
    for i in 0..rng.gen_range(1..8) {
        let x = pool.choose(rng).unwrap();
        let compound = match rng.gen_range(0..3) {
            0 => format!("(+/B.am {x}/C seed/C)"),
            1 => format!("(+/B.ma seed/C {x}/C)"),
            _ => {
                let y = pool.choose(rng).unwrap();
                format!("(+/B.am {y}/C (+/B.am {x}/C seed/C))")
            }
        };
        top.extend(mentions(&compound, &format!("r{i}x"), rng.gen_range(0..6)));
        top.push(compound);
    }
    top.extend(mentions("seed/C", "bare", rng.gen_range(0..4)));
    top
}

#[test]
fn sets_partition_the_compounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let seed = h("seed/C");
    for _ in 0..300 {
        let top = random_fixture(&mut rng);
        let s = store(&top);
        let oracle = Oracle::new(&top);
        let sets = coref_sets(&s, &seed, &CorefParams::default()).unwrap();
        let compounds: BTreeSet<Hyperedge> = compounds_of(&s, &seed).into_iter().collect();
        let mut seen = BTreeSet::new();
        for set in &sets {
            assert!(set.members.contains(&set.label));
            assert!((0.0..=1.0).contains(&set.p));
            for m in &set.members {
                assert!(seen.insert(m.clone()), "{m} in two sets of {top:?}");
                assert!(auxiliaries(m, &seed).iter().all(|a| set.clique.contains(a)));
            }
        }
        assert_eq!(seen, compounds);
        let total: usize = compounds.iter().map(|c| oracle.degree(c)).sum();
        assert!(sets.iter().map(|c| c.total_degree).sum::<usize>() <= total);
        assert!(sets.iter().map(|c| c.p).sum::<f64>() <= 1.0 + 1e-9);
    }
}

#[test]
fn raising_thresholds_never_assigns() {
    check_raising_thresholds_never_assigns();
}

pub fn check_raising_thresholds_never_assigns() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let seed = h("seed/C");
    let grid = [0.0, 0.05, 0.2, 0.5, 0.7, 0.9, 1.0];
    for _ in 0..200 {
        let top = random_fixture(&mut rng);
        let s = store(&top);
        let sets = coref_sets(&s, &seed, &CorefParams::default()).unwrap();
        let assigned = |t: f64, tp: f64| {
            let p = CorefParams { theta: t, theta_prime: tp, ..Default::default() };
            assign_seed(&s, &seed, &sets, &p).assigned.is_some()
        };
        for &t in &grid {
            for &tp in &grid {
                if assigned(t, tp) {
                    continue;
                }
                for &t2 in grid.iter().filter(|&&x| x >= t) {
                    for &tp2 in grid.iter().filter(|&&x| x >= tp) {
                        assert!(!assigned(t2, tp2), "{t},{tp} -> {t2},{tp2} on {top:?}");
                    }
                }
            }
        }
    }
}
