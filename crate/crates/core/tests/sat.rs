use promptltl::sat::{Lit, Solver, Var};
use promptltl::testkit::Generator;
use rand::Rng;

fn vars(solver: &mut Solver, n: usize) -> Vec<Var> {
    (0..n).map(|_| solver.new_var()).collect()
}

#[test]
fn empty_problem_is_satisfiable() {
    let mut s = Solver::new();
    assert!(s.solve());
    let v = s.new_var();
    assert!(s.solve());
    let _ = s.value(v);
}

#[test]
fn contradictory_units_are_unsatisfiable() {
    let mut s = Solver::new();
    let v = s.new_var();
    s.add_clause(&[Lit::pos(v)]);
    s.add_clause(&[Lit::neg(v)]);
    assert!(!s.solve());
    s.add_clause(&[Lit::pos(v)]);
    assert!(!s.solve(), "unsatisfiability is permanent");
}

#[test]
fn implication_chains_propagate() {
    let mut s = Solver::new();
    let v = vars(&mut s, 5);
    for w in v.windows(2) {
        s.add_clause(&[Lit::neg(w[0]), Lit::pos(w[1])]);
    }
    s.add_clause(&[Lit::pos(v[0])]);
    assert!(s.solve());
    assert!(v.iter().all(|&x| s.value(x)));
    s.add_clause(&[Lit::neg(v[4])]);
    assert!(!s.solve());
}

fn pigeonhole(pigeons: usize, holes: usize) -> Solver {
    let mut s = Solver::new();
    let slot: Vec<Vec<Var>> =
        (0..pigeons).map(|_| (0..holes).map(|_| s.new_var()).collect()).collect();
    for p in 0..pigeons {
        let any: Vec<Lit> = (0..holes).map(|h| Lit::pos(slot[p][h])).collect();
        s.add_clause(&any);
    }
    for h in 0..holes {
        for p1 in 0..pigeons {
            for p2 in p1 + 1..pigeons {
                s.add_clause(&[Lit::neg(slot[p1][h]), Lit::neg(slot[p2][h])]);
            }
        }
    }
    s
}

#[test]
fn pigeonhole_instances() {
    assert!(pigeonhole(3, 3).solve());
    assert!(!pigeonhole(4, 3).solve());
    assert!(!pigeonhole(6, 5).solve());
}

#[test]
fn blocking_clauses_enumerate_all_models() {
    let mut s = Solver::new();
    let v = vars(&mut s, 3);
    s.add_clause(&[Lit::pos(v[0]), Lit::pos(v[1]), Lit::pos(v[2])]);
    let mut models = Vec::new();
    while s.solve() {
        let model: Vec<bool> = v.iter().map(|&x| s.value(x)).collect();
        let block: Vec<Lit> = v
            .iter()
            .zip(&model)
            .map(|(&x, &b)| if b { Lit::neg(x) } else { Lit::pos(x) })
            .collect();
        s.add_clause(&block);
        models.push(model);
    }
    assert_eq!(models.len(), 7);
    models.sort();
    models.dedup();
    assert_eq!(models.len(), 7);
}

#[test]
fn solver_is_deterministic() {
    let run = || {
        let mut s = pigeonhole(3, 3);
        assert!(s.solve());
        let model: Vec<bool> = (0..s.num_vars()).map(|i| s.value(Var::from_index(i))).collect();
        (model, s.num_conflicts())
    };
    assert_eq!(run(), run());
}

#[test]
fn random_instances_match_exhaustive_search() {
    let mut gen = Generator::new(47);
    for _ in 0..200 {
        let n = gen.rng().gen_range(1..=10usize);
        let m = gen.rng().gen_range(1..=30usize);
        let clauses: Vec<Vec<(usize, bool)>> = (0..m)
            .map(|_| {
                (0..3)
                    .map(|_| (gen.rng().gen_range(0..n), gen.rng().gen_bool(0.5)))
                    .collect()
            })
            .collect();
        let brute = (0..1u32 << n).any(|m| {
            clauses.iter().all(|c| c.iter().any(|&(v, pos)| (m >> v & 1 == 1) == pos))
        });
        let mut s = Solver::new();
        let v = vars(&mut s, n);
        for c in &clauses {
            let lits: Vec<Lit> = c
                .iter()
                .map(|&(i, pos)| if pos { Lit::pos(v[i]) } else { Lit::neg(v[i]) })
                .collect();
            s.add_clause(&lits);
        }
        let verdict = s.solve();
        assert_eq!(verdict, brute, "solver disagrees on {clauses:?}");
        if verdict {
            let model: Vec<bool> = v.iter().map(|&x| s.value(x)).collect();
            assert!(clauses.iter().all(|c| c.iter().any(|&(i, pos)| model[i] == pos)));
        }
    }
}
