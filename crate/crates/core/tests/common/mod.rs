#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use widthplan::model::{GroundAction, StripsTask};
use widthplan::parser::{ground, parse};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn load(domain: &str, problem: &str) -> StripsTask {
    let dir = corpus_dir();
    let d = std::fs::read_to_string(dir.join(domain)).unwrap();
    let p = std::fs::read_to_string(dir.join(problem)).unwrap();
    let (d, p) = parse(&d, &p).unwrap();
    ground(&d, &p).unwrap()
}

/// Every (domain, problem) pair in the corpus, relative to its root.
pub fn corpus_pairs() -> Vec<(String, String)> {
    let dir = corpus_dir();
    let mut out = Vec::new();
    let mut dirs = vec![dir.clone()];
    while let Some(d) = dirs.pop() {
        let mut entries: Vec<_> = std::fs::read_dir(&d).unwrap().map(|e| e.unwrap().path()).collect();
        entries.sort();
        let domain = d.join("domain.pddl");
        for e in entries {
            if e.is_dir() {
                dirs.push(e);
            } else if domain.exists() && e != domain && e.extension().is_some_and(|x| x == "pddl") {
                let rel = |p: &std::path::Path| p.strip_prefix(&dir).unwrap().display().to_string();
                out.push((rel(&domain), rel(&e)));
            }
        }
    }
    out.sort();
    out
}

/// Random STRIPS task: `n` fluents, `m` actions with small precondition,
/// add and delete lists, random init and a one- or two-fluent goal.
pub fn random_task(rng: &mut impl Rng, n: usize, m: usize) -> StripsTask {
    let pick = |rng: &mut dyn rand::RngCore, lo: usize, hi: usize| -> Vec<usize> {
        let c = rng.gen_range(lo..=hi);
        (0..c).map(|_| rng.gen_range(0..n)).collect()
    };
    let mut actions = Vec::new();
    for i in 0..m {
        let pre = pick(rng, 0, 2);
        let add = pick(rng, 1, 2);
        let del: Vec<usize> = pick(rng, 0, 2).into_iter().filter(|d| !add.contains(d)).collect();
        actions.push(GroundAction::new(i, format!("a{i}"), pre, add, del));
    }
    let init = pick(rng, 1, 3);
    let goal = pick(rng, 1, 2);
    let names = (0..n).map(|i| format!("f{i}")).collect();
    StripsTask::new("random", names, actions, init, goal).unwrap()
}

/// Random task over `vars` two-valued variables. Fluent `2v` says variable
/// `v` is true and `2v + 1` says it is false, and every action keeps exactly
/// one of the pair, so each reachable state holds exactly `vars` fluents.
pub fn binary_task(rng: &mut impl Rng, vars: usize, m: usize) -> StripsTask {
    let lit = |v: usize, val: bool| 2 * v + usize::from(!val);
    let mut actions = Vec::new();
    for i in 0..m {
        let pre: Vec<usize> = (0..rng.gen_range(0..=2)).map(|_| lit(rng.gen_range(0..vars), rng.gen_bool(0.5))).collect();
        let mut vs: Vec<usize> = (0..vars).collect();
        vs.shuffle(rng);
        let (mut add, mut del) = (Vec::new(), Vec::new());
        for &v in &vs[..rng.gen_range(1..=2.min(vars))] {
            let val = rng.gen_bool(0.5);
            add.push(lit(v, val));
            del.push(lit(v, !val));
        }
        actions.push(GroundAction::new(i, format!("a{i}"), pre, add, del));
    }
    let init: Vec<usize> = (0..vars).map(|v| lit(v, rng.gen_bool(0.5))).collect();
    let goal: Vec<usize> = (0..rng.gen_range(1..=2)).map(|_| lit(rng.gen_range(0..vars), rng.gen_bool(0.5))).collect();
    let names = (0..2 * vars).map(|f| format!("v{}={}", f / 2, f % 2 == 0)).collect();
    StripsTask::new("binary", names, actions, init, goal).unwrap()
}

/// Tokens on the cells of a random graph; a token moves along an edge into
/// an empty cell. Fluents are `at(t, c)` and `empty(c)`. The goal puts the
/// tokens on a random permutation of their starting cells.
pub fn token_task(rng: &mut impl Rng, tokens: usize, cells: usize) -> StripsTask {
    assert!(tokens < cells);
    let at = |t: usize, c: usize| t * cells + c;
    let empty = |c: usize| tokens * cells + c;
    let mut names: Vec<String> = Vec::new();
    for t in 0..tokens {
        for c in 0..cells {
            names.push(format!("at(t{t},c{c})"));
        }
    }
    for c in 0..cells {
        names.push(format!("empty(c{c})"));
    }
    // a spanning path plus random chords keeps the graph connected
    let mut order: Vec<usize> = (0..cells).collect();
    order.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = order.windows(2).map(|w| (w[0], w[1])).collect();
    for a in 0..cells {
        for b in a + 1..cells {
            if rng.gen_bool(0.3) && !edges.contains(&(a, b)) && !edges.contains(&(b, a)) {
                edges.push((a, b));
            }
        }
    }
    let mut actions = Vec::new();
    for &(a, b) in &edges {
        for (from, to) in [(a, b), (b, a)] {
            for t in 0..tokens {
                let id = actions.len();
                actions.push(GroundAction::new(
                    id,
                    format!("move(t{t},c{from},c{to})"),
                    [at(t, from), empty(to)],
                    [at(t, to), empty(from)],
                    [at(t, from), empty(to)],
                ));
            }
        }
    }
    let mut start: Vec<usize> = (0..cells).collect();
    start.shuffle(rng);
    let start = &start[..tokens];
    let mut init: Vec<usize> = start.iter().enumerate().map(|(t, &c)| at(t, c)).collect();
    init.extend((0..cells).filter(|c| !start.contains(c)).map(empty));
    let mut perm = start.to_vec();
    perm.shuffle(rng);
    let goal: Vec<usize> = perm.iter().enumerate().map(|(t, &c)| at(t, c)).collect();
    StripsTask::new("tokens", names, actions, init, goal).unwrap()
}

/// Binomial coefficient.
pub fn choose(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
