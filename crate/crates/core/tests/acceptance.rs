//! Acceptance runner: one PASS/FAIL line per criterion, nonzero exit status
//! if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

use common::*;
use quiverlab::desing::{count_filtrations, fibre_polynomial, variety_dims, verify_desingularization, FlagType};
use quiverlab::hall::{
    bar_involution, canonical_basis, canonical_element, convolve, divided_power_element, monomial_element,
    serre_element, HallElement,
};
use quiverlab::partition::{an_partition, d4_partition, default_partition, is_directed, monomial_of, DirectedPartition};
use quiverlab::reps::{end_and_orbit_dim, hom_classes};
use quiverlab::strata::{
    fibre_dim, gamma_paths, is_special, middle_terms, special_middle_terms, stratum_count, stratum_dims, SpecialPoset,
};
use quiverlab::{CountPolynomial, DimVector, Engine, LaurentPoly, RepClass};

type Outcome = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

fn engine(spec: &str) -> Engine {
    Engine::new(&quiver(spec)).unwrap()
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

const A3_ALL: [&str; 4] = ["1->2,2->3", "1->2,3->2", "2->1,2->3", "2->1,3->2"];
const D4: &str = "1->0,2->0,3->0";

/// The monomial element at `N`, divided by `v^(end M - dim M)`, at `q = p`.
fn value_at_prime(x: &LaurentPoly, p: i128) -> Option<i128> {
    let mut acc = 0i128;
    for (&e, &c) in x.terms() {
        if e < 0 || e % 2 != 0 {
            return None;
        }
        acc += c as i128 * p.pow(e as u32 / 2);
    }
    Some(acc)
}

fn criterion_1() -> Outcome {
    let (mut checked, mut nonzero) = (0, 0);
    let specs: Vec<&str> = ["1->2"].into_iter().chain(A3_ALL).chain([D4]).collect();
    for spec in specs {
        let e = engine(spec);
        let ar = e.ar();
        let q = ar.quiver();
        let part = default_partition(ar);
        for d in weights_up_to(ar, 5) {
            let table = e.table(&d).map_err(err)?;
            let reps: Vec<_> = [2u32, 3]
                .iter()
                .map(|&p| table.classes.iter().map(|n| e.realize(n, p).unwrap()).collect::<Vec<_>>())
                .collect();
            for m in table.classes.iter() {
                let mono = monomial_element(&e, &part, m).map_err(err)?;
                let ft = monomial_of(ar, &part, ar.vertex_order(), m);
                let s = hom_classes(ar, m, m) as i32 - d.total() as i32;
                for (k, n) in table.classes.iter().enumerate() {
                    let scaled = mono.value(n).shift(-s);
                    for (pi, &p) in [2u32, 3].iter().enumerate() {
                        let count = count_filtrations(q, &reps[pi][k], &ft).map_err(err)?;
                        let lhs = value_at_prime(&scaled, p as i128);
                        ensure!(
                            lhs == Some(count as i128),
                            "{spec}: E^(M)(N) = {} for M = {}, N = {} at q = {p}, count {count}",
                            mono.value(n),
                            m.display(ar),
                            n.display(ar)
                        );
                        checked += 1;
                        nonzero += (count > 0) as usize;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} (M, N, p) triples, {nonzero} nonempty"))
}

fn partitions_for(spec: &str, e: &Engine) -> Vec<(&'static str, DirectedPartition)> {
    let ar = e.ar();
    let mut out = vec![("default", default_partition(ar))];
    if spec == D4 {
        out.push(("preset", d4_partition(ar).unwrap()));
    } else if let Ok(p) = an_partition(ar) {
        out.push(("preset", p));
    }
    out
}

fn criterion_2() -> Outcome {
    let mut checked = 0;
    let specs: Vec<&str> = ["1->2", "2->1"].into_iter().chain(A3_ALL).chain([D4]).collect();
    for spec in specs {
        let e = engine(spec);
        let ar = e.ar();
        for (name, part) in partitions_for(spec, &e) {
            for d in weights_up_to(ar, 6) {
                for m in e.table(&d).map_err(err)?.classes.iter() {
                    let r = verify_desingularization(&e, m, &part).map_err(err)?;
                    ensure!(r.passed, "{spec} ({name} partition): desingularization check fails for {}", m.display(ar));
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} classes"))
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    let specs: Vec<&str> = ["1->2"].into_iter().chain(A3_ALL).chain([D4]).collect();
    for spec in specs {
        let e = engine(spec);
        let ar = e.ar();
        let q = ar.quiver();
        let part = default_partition(ar);
        for d in weights_up_to(ar, 5) {
            let table = e.table(&d).map_err(err)?;
            for m in table.classes.iter() {
                let ft = monomial_of(ar, &part, ar.vertex_order(), m);
                let vd = variety_dims(q, &ft);
                let (_, orbit) = end_and_orbit_dim(ar, m);
                ensure!(vd.total == orbit as u64, "{spec}: incidence variety of {} has dim {}, orbit {orbit}", m.display(ar), vd.total);
                for n in table.classes.iter() {
                    let fibre = fibre_polynomial(&e, n, &ft).map_err(err)?;
                    let fd = fibre_dim(&e, n, &ft).map_err(err)?;
                    ensure!(
                        fibre.degree().map(|x| x as i64) == fd,
                        "{spec}: fibre {fibre} over {} has dimension {fd:?}",
                        n.display(ar)
                    );
                    let mut sum = CountPolynomial::zero();
                    for path in gamma_paths(&e, n, &ft).map_err(err)? {
                        let c = stratum_count(&e, &path, &ft).map_err(err)?;
                        let (orbital, f) = stratum_dims(ar, &path, &ft).map_err(err)?;
                        ensure!(c.degree().map(|x| x as i64) == Some(f), "{spec}: stratum count {c} vs dimension {f}");
                        let end0 = hom_classes(ar, n, n) as i64;
                        ensure!(f == orbital - vd.parabolic as i64 + end0, "{spec}: orbital {orbital} and fibre {f} disagree");
                        sum = &sum + &c;
                    }
                    ensure!(sum == fibre, "{spec}: strata add up to {sum}, fibre is {fibre}");
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (M, N) pairs"))
}

fn criterion_4() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let mut checked = 0;
    for n in 2..=4usize {
        let e = engine(&equioriented(n));
        let ar = e.ar();
        let q = ar.quiver();
        let part = an_partition(ar).map_err(err)?;
        let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect();
        let strat = proptest::collection::vec(0u32..4, pairs.len());
        for _ in 0..50 {
            let mults = strat.new_tree(&mut runner).map_err(err)?.current();
            let mut mm = vec![vec![0u32; n + 1]; n + 1];
            let mut class = RepClass::zero(ar);
            for (&(i, j), &k) in pairs.iter().zip(&mults) {
                mm[i][j] = k;
                let mut d = q.zero();
                for v in i..=j {
                    d.0[q.vertex(&v.to_string()).unwrap()] = 1;
                }
                class.0[ar.root_index(&d).map_err(err)?] += k;
            }
            let mut word = Vec::new();
            let mut weights = Vec::new();
            for i in (1..=n).rev() {
                for j in i..=n {
                    word.push(j.to_string());
                    weights.push((j..=n).map(|k| mm[i][k]).sum::<u32>());
                }
            }
            let ft = monomial_of(ar, &part, ar.vertex_order(), &class).to_json(q);
            ensure!(ft.word == word && ft.weights == weights, "A_{n}: {:?} / {:?} differs from {word:?} / {weights:?}", ft.word, ft.weights);
            checked += 1;
        }
    }
    Ok(format!("{checked} random multiplicity tuples"))
}

fn criterion_5() -> Outcome {
    for n in 1..=6 {
        let ar = knit(&equioriented(n));
        let p = an_partition(&ar).map_err(err)?;
        ensure!(is_directed(&ar, &p).is_none(), "A_{n} partition is not directed");
    }
    let ar = knit(D4);
    let p = d4_partition(&ar).map_err(err)?;
    if let Some(v) = is_directed(&ar, &p) {
        return Err(format!("D_4 partition: {}", v.describe(&ar)));
    }
    Ok("A_1..A_6 and D_4".into())
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    let d4: Vec<String> = orientations(&[("0", "1"), ("0", "2"), ("0", "3")]);
    for n in 2..=4 {
        for spec in orientations_of_path(n) {
            let s = is_special(&knit(&spec)).map_err(|e| format!("{spec}: {e}"))?;
            ensure!(s.special, "{spec}: type A orientation is not special");
            checked += 1;
        }
    }
    for spec in &d4 {
        is_special(&knit(spec)).map_err(|e| format!("{spec}: {e}"))?;
        checked += 1;
    }
    let sink = is_special(&knit(D4)).map_err(err)?;
    ensure!(sink.special, "D_4 with all arrows into 0 is not special");
    for spec in ["1->2,2->3,3->4,5->3,6->5", "1->2,2->3,3->4,5->3,6->5,7->6", "1->2,2->3,3->4,4->5,5->6,6->7,8->3"] {
        is_special(&knit(spec)).map_err(|e| format!("{spec}: {e}"))?;
        checked += 1;
    }
    let e8 = [("1", "2"), ("2", "3"), ("3", "4"), ("4", "5"), ("5", "6"), ("6", "7"), ("3", "8")];
    for spec in orientations(&e8) {
        let s = is_special(&knit(&spec)).map_err(|e| format!("{spec}: {e}"))?;
        ensure!(!s.special, "{spec}: E_8 orientation is special");
        checked += 1;
    }
    Ok(format!("{checked} orientations, criteria agree"))
}

fn criterion_7() -> Outcome {
    let (mut checked, mut several) = (0, 0);
    let specs: Vec<&str> = ["1->2", "2->1"].into_iter().chain(A3_ALL).chain([D4]).collect();
    for spec in specs {
        let e = engine(spec);
        let ar = e.ar();
        let posets: Vec<SpecialPoset> =
            (0..ar.quiver().vertex_count()).map(|i| SpecialPoset::new(ar, i)).collect::<Result<_, _>>().map_err(err)?;
        for d in weights_up_to(ar, 6) {
            for m in e.table(&d).map_err(err)?.classes.iter() {
                for (i, sp) in posets.iter().enumerate() {
                    let by_chains = special_middle_terms(ar, sp, m).map_err(err)?;
                    let brute = middle_terms(&e, m, i, 1, 2).map_err(err)?;
                    several += (brute.len() > 1) as usize;
                    ensure!(
                        by_chains == brute,
                        "{spec}: M = {}, vertex {}: antichains give {:?}, search gives {:?}",
                        m.display(ar),
                        ar.quiver().label(i),
                        show(ar, &by_chains),
                        show(ar, &brute)
                    );
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (M, i) pairs, {several} with several middle terms"))
}

fn show(ar: &quiverlab::ArData, s: &BTreeSet<RepClass>) -> Vec<String> {
    s.iter().map(|c| c.display(ar).to_string()).collect()
}

fn criterion_8() -> Outcome {
    let (mut checked, mut nonzero, mut multi) = (0, 0, 0);
    for n in 1..=3 {
        let e = engine(&equioriented(n));
        let ar = e.ar();
        let part = an_partition(ar).map_err(err)?;
        for d in weights_up_to(ar, 5) {
            let table = e.table(&d).map_err(err)?;
            for m in table.classes.iter() {
                let ft = monomial_of(ar, &part, ar.vertex_order(), m);
                let mm = interval_mults(ar, n, m);
                for nc in table.classes.iter() {
                    let paths = gamma_paths(&e, nc, &ft).map_err(err)?.len() as u64;
                    nonzero += (paths > 0) as usize;
                    multi += (paths > 1) as usize;
                    let tuples = an_tuple_count(n, &mm, &interval_mults(ar, n, nc));
                    ensure!(
                        paths == tuples,
                        "A_{n}: M = {}, N = {}: {paths} paths, {tuples} tuples",
                        m.display(ar),
                        nc.display(ar)
                    );
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (M, N) pairs, {nonzero} with paths, {multi} with several"))
}

fn criterion_9() -> Outcome {
    let mut checked = 0;
    let specs: Vec<&str> = ["1->2"].into_iter().chain(A3_ALL).collect();
    for spec in specs {
        let e = engine(spec);
        let ar = e.ar();
        let part = default_partition(ar);
        for d in weights_up_to(ar, 4) {
            let cb = canonical_basis(&e, &part, &d).map_err(|x| format!("{spec} {d}: {x}"))?;
            ensure!(cb.monomial_to_pbw.is_unitriangular(), "{spec} {d}: monomial to PBW not unitriangular");
            ensure!(cb.monomial_to_canonical.is_unitriangular(), "{spec} {d}: monomial to canonical not unitriangular");
            for row in &cb.monomial_to_canonical.entries {
                ensure!(row.iter().all(|x| x.has_nonnegative_coefficients()), "{spec} {d}: negative monomial coefficient");
            }
            ensure!(cb.zeta.at_one().iter().flatten().all(|&x| x >= 0), "{spec} {d}: negative zeta at v = 1");
            for m in &cb.zeta.classes {
                let c = canonical_element(&e, &part, m).map_err(err)?;
                ensure!(bar_involution(&e, &part, &c).map_err(err)? == c, "{spec}: C_M not bar-invariant for {}", m.display(ar));
            }
            checked += 1;
        }
    }
    let e = engine("1->2");
    let ar = e.ar();
    let d = DimVector(vec![1, 2]);
    let cb = canonical_basis(&e, &default_partition(ar), &d).map_err(err)?;
    let m = class(ar, &[(&[1, 1], 1), (&[0, 1], 1)]);
    let n = class(ar, &[(&[1, 0], 1), (&[0, 1], 2)]);
    let pos = |c: &RepClass| cb.zeta.classes.iter().position(|x| x == c).unwrap();
    ensure!(cb.zeta.entries[pos(&m)][pos(&n)] == LaurentPoly::v_pow(-2), "A_2 (1,2): zeta is {}", cb.zeta.entries[pos(&m)][pos(&n)]);
    Ok(format!("{checked} weights plus the A_2 (1,2) fixture"))
}

fn criterion_10() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let mut triples = 0;
    for spec in ["1->2,2->3", "1->2,3->2", D4] {
        let e = engine(spec);
        let ar = e.ar();
        let pool: Vec<RepClass> = weights_up_to(ar, 2)
            .into_iter()
            .flat_map(|d| e.table(&d).unwrap().classes.clone())
            .collect();
        let pick = (0..pool.len(), 0..pool.len(), 0..pool.len());
        let mut done = 0;
        while done < 25 {
            let (a, b, c) = pick.new_tree(&mut runner).map_err(err)?.current();
            let (fa, fb, fc) = (&pool[a], &pool[b], &pool[c]);
            if fa.dim(ar).total() + fb.dim(ar).total() + fc.dim(ar).total() > 4 {
                continue;
            }
            let (x, y, z) = (HallElement::indicator(&e, fa), HallElement::indicator(&e, fb), HallElement::indicator(&e, fc));
            let left = convolve(&e, &convolve(&e, &x, &y).map_err(err)?, &z).map_err(err)?;
            let right = convolve(&e, &x, &convolve(&e, &y, &z).map_err(err)?).map_err(err)?;
            ensure!(left == right, "{spec}: product of {}, {}, {} is not associative", fa.display(ar), fb.display(ar), fc.display(ar));
            done += 1;
        }
        triples += done;
    }
    let mut serre = 0;
    let specs: Vec<&str> = ["1->2"].into_iter().chain(A3_ALL).chain([D4]).collect();
    for spec in specs {
        let e = engine(spec);
        let q = e.quiver();
        for &(s, t) in q.arrows() {
            for (i, j) in [(s, t), (t, s)] {
                ensure!(serre_element(&e, i, j).map_err(err)?.is_zero(), "{spec}: Serre relation fails for ({i}, {j})");
                serre += 1;
            }
        }
    }
    let e = engine(D4);
    let ar = e.ar();
    for i in 0..4 {
        for n in 0..=4u32 {
            let dp = divided_power_element(&e, i, n).map_err(err)?;
            let zero = RepClass::simple_power(ar, i, n);
            ensure!(dp.values.len() == 1, "E_i^({n}) has support of size {}", dp.values.len());
            ensure!(dp.value(&zero) == LaurentPoly::v_pow((n * n.saturating_sub(1)) as i32), "E_i^({n})(0) = {}", dp.value(&zero));
        }
    }
    let q = e.quiver();
    for n in 1..=4u32 {
        for p in [2u32, 3] {
            let x = e.realize(&RepClass::simple_power(ar, 0, n), p).map_err(err)?;
            let ft = FlagType::new(q, vec![0; n as usize], vec![1; n as usize]).map_err(err)?;
            let c = count_filtrations(q, &x, &ft).map_err(err)?;
            ensure!(c == complete_flags(p as u128, n), "complete flags in F_{p}^{n}: {c}");
        }
    }
    Ok(format!("{triples} associativity triples, {serre} Serre relations, divided powers and flag counts"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("monomial values equal flag counts", criterion_1),
        ("desingularization fibres", criterion_2),
        ("dimension formulas and strata counts", criterion_3),
        ("A_n monomial function", criterion_4),
        ("directed partition presets", criterion_5),
        ("special quiver criteria", criterion_6),
        ("antichain middle terms", criterion_7),
        ("A_n strata tuples", criterion_8),
        ("basis triangularity and positivity", criterion_9),
        ("algebra sanity", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {:>2}: PASS  {name} ({detail}; {secs:.1}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {why} ({secs:.1}s)", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
