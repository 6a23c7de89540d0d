//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::time::{Duration, Instant};

use flopgw::algebra::rational::{int, rat, Rational};
use flopgw::algebra::RatFunc;
use flopgw::batyrev::{self, GaussianRational};
use flopgw::coh_ring;
use flopgw::flop;
use flopgw::givental::genus_one::{genus_one_form, genus_one_table, GenusOneForm};
use flopgw::givental::xi_constant;
use flopgw::verify::{appendix_checks, Check};
use flopgw::weyl::{self, LoopOperator, LoopSpace};

struct Verdict {
    criterion: u32,
    ok: bool,
    detail: String,
}

fn verdict(criterion: u32, failures: Vec<String>, summary: String) -> Verdict {
    let ok = failures.is_empty();
    let detail = if ok { summary } else { failures.join("; ") };
    Verdict { criterion, ok, detail }
}

fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// q / (1 - (-1)^{r+1} q), built here rather than taken from the library
fn g_of(r: u32) -> RatFunc {
    let q = RatFunc::var();
    &q / &(&RatFunc::one() - &q.scale_rational(&int(sign(r as i64 + 1))))
}

fn kappa(r: u32) -> Rational {
    rat(sign(r as i64 + 1) * (r as i64 + 1), 24)
}

fn criterion_1(forms: &[(u32, GenusOneForm, Duration)]) -> Verdict {
    let mut fails = Vec::new();
    let mut times = Vec::new();
    for (r, form, t) in forms {
        let r = *r;
        let want = g_of(r).scale_rational(&kappa(r));
        if form.remainder != want {
            fails.push(format!("r={r}: q-dependent part {} != kappa G", form.remainder));
        }
        let c0 = rat(-(r as i64) * (r as i64 + 1), 48);
        if form.coefficient != &RatFunc::from_rational(c0.clone()) + &want {
            fails.push(format!("r={r}: full coefficient differs from {c0} + kappa G"));
        }
        if *t >= Duration::from_secs(60) {
            fails.push(format!("r={r}: took {t:?}"));
        }
        times.push(format!("r={r} {:.2}s", t.as_secs_f64()));
    }
    verdict(1, fails, format!("dG = kappa q/(1 - s q) dlog q for r=1..5 ({})", times.join(", ")))
}

fn criterion_2(forms: &[(u32, GenusOneForm, Duration)]) -> Verdict {
    let mut fails = Vec::new();
    for (r, form, _) in forms {
        let r = *r;
        let table = match genus_one_table(form, 10) {
            Ok(t) => t,
            Err(e) => {
                fails.push(format!("r={r}: {e}"));
                continue;
            }
        };
        for row in &table.rows {
            let d = row.degree as i64;
            let want = rat(sign(d * (r as i64 + 1)) * (r as i64 + 1), 24 * d);
            if row.value != want {
                fails.push(format!("r={r} d={d}: {} != {want}", row.value));
            }
            if r == 1 && row.value != rat(1, 12 * d) {
                fails.push(format!("r=1 d={d}: {} != 1/(12d)", row.value));
            }
        }
    }
    verdict(2, fails, "r=1 gives 1/(12d); r=1..5 give (-1)^{d(r+1)}(r+1)/(24d), d=1..10".into())
}

fn criterion_3() -> Verdict {
    let mut fails = Vec::new();
    for r in 1..=8u32 {
        let r64 = r as i64;
        match xi_constant(r) {
            Ok(x) => {
                let want = rat(-(r64 + 2) * (r64 + 1) * (r64 + 1) * r64, 24);
                if x.value != want {
                    fails.push(format!("r={r}: Xi = {} != {want}", x.value));
                }
                if !x.vanishing_sum_zero {
                    fails.push(format!("r={r}: companion sum nonzero"));
                }
            }
            Err(e) => fails.push(format!("r={r}: {e}")),
        }
    }
    verdict(3, fails, "Xi_r = -(r+2)(r+1)^2 r/24 and the companion sum vanishes, r=1..8".into())
}

fn criterion_4() -> Verdict {
    let mut fails = Vec::new();
    for r in 1..=6u32 {
        let chern = coh_ring::chern_flop_identity(r);
        if chern != int(-(r as i64 + 1)) {
            fails.push(format!("r={r}: (c_2r.(2h - xi)) = {chern}"));
        }
    }
    let defects: Vec<(u32, flopgw::Result<Rational>)> = std::thread::scope(|s| {
        let hs: Vec<_> = (1..=6u32).map(|r| (r, s.spawn(move || flop::genus1_onepoint_defect(r)))).collect();
        hs.into_iter().map(|(r, h)| (r, h.join().expect("defect thread"))).collect()
    });
    for (r, d) in defects {
        match d {
            Ok(d) if d == Rational::from_integer(0.into()) => {}
            Ok(d) => fails.push(format!("r={r}: defect {d}")),
            Err(e) => fails.push(format!("r={r}: {e}")),
        }
    }
    verdict(4, fails, "Chern number -(r+1) and zero one-point defect, r=1..6".into())
}

fn criterion_5(forms: &[(u32, GenusOneForm, Duration)]) -> Verdict {
    let mut fails = Vec::new();
    for r in 1..=5u32 {
        if !flop::verify_reflection(r) {
            fails.push(format!("r={r}: G(q) + G(1/q) != (-1)^r"));
        }
        let g = g_of(r);
        let want = &g + &(&g * &g).scale_rational(&int(sign(r as i64 + 1)));
        if g.delta(1) != want || flop::delta_g_direct(r, 1) != want {
            fails.push(format!("r={r}: delta G != G + s G^2"));
        }
        for m in 1..=7u32 {
            match flop::check_delta_g_polynomial(r, m, 30) {
                Ok(c) if c.passed() => {}
                Ok(c) => fails.push(format!("r={r} m={m}: {c:?}")),
                Err(e) => fails.push(format!("r={r} m={m}: {e}")),
            }
            if !flop::reciprocal_antisymmetry(r, m) {
                fails.push(format!("r={r} m={m}: reciprocal parity"));
            }
        }
    }
    for (r, form, _) in forms.iter().filter(|(r, _, _)| *r <= 4) {
        for n in 2..=6u32 {
            match flop::genus1_npoint_invariance(&form.remainder, n) {
                Ok(true) => {}
                Ok(false) => fails.push(format!("r={r} n={n}: n-point invariance")),
                Err(e) => fails.push(format!("r={r} n={n}: {e}")),
            }
        }
    }
    verdict(5, fails, "reflection, delta G, integral delta^m G (m<=7, order 30), parity, n-point (n=2..6, r<=4)".into())
}

fn is_rmatrix(c: &Check) -> bool {
    c.id.starts_with("rmatrix-")
}

fn criteria_6_7() -> (Verdict, Verdict) {
    let results: Vec<(u32, Vec<Check>)> = std::thread::scope(|s| {
        let hs: Vec<_> = (1..=5u32)
            .map(|r| (r, s.spawn(move || appendix_checks(r, if r <= 3 { 3 } else { 1 }, 10))))
            .collect();
        hs.into_iter().map(|(r, h)| (r, h.join().expect("appendix thread"))).collect()
    });
    let mut f6 = Vec::new();
    let mut f7 = Vec::new();
    let mut n6 = 0;
    let mut n7 = 0;
    for (r, checks) in &results {
        for c in checks {
            let line = format!("r={r} {} [{}]: {}", c.id, c.anchor, c.residual);
            if is_rmatrix(c) {
                if *r <= 3 {
                    n7 += 1;
                    if !c.passed() {
                        f7.push(line);
                    }
                }
            } else {
                n6 += 1;
                if !c.passed() {
                    f6.push(line);
                }
            }
        }
    }
    for r in 1..=3 {
        let have = |id: &str| results[r - 1].1.iter().any(|c| c.id == id);
        if !(have("rmatrix-first-order") && have("rmatrix-unitarity")) {
            f7.push(format!("r={r}: recursion checks missing"));
        }
    }
    (
        verdict(6, f6, format!("{n6} intermediate identities exact for r=1..5")),
        verdict(7, f7, format!("{n7} recursion checks (R_1 agreement, unitarity n<=3) for r=1..3")),
    )
}

fn criterion_8() -> Verdict {
    let mut fails = Vec::new();
    let sample = (GaussianRational::real(rat(3, 10)), GaussianRational::real(rat(7, 10)));
    let mut gaps = Vec::new();
    for r in 1..=3u32 {
        match batyrev::verify_eigen_relations(r, 10) {
            Ok(rep) => {
                if !rep.passed() || rep.pairs_checked != ((r + 1) * (r + 2)) as usize {
                    fails.push(format!("r={r}: {} pairs, {} failures", rep.pairs_checked, rep.failures.len()));
                }
            }
            Err(e) => fails.push(format!("r={r}: {e}")),
        }
        match batyrev::semisimplicity_certificate(r, &sample.0, &sample.1, 1e-6, 1e-9) {
            Ok(c) if c.min_gap > 1e-6 && c.max_mismatch < 1e-9 => {
                gaps.push(format!("r={r} gap {:.3e} mismatch {:.1e}", c.min_gap, c.max_mismatch))
            }
            Ok(c) => fails.push(format!("r={r}: gap {} mismatch {}", c.min_gap, c.max_mismatch)),
            Err(e) => fails.push(format!("r={r}: {e}")),
        }
    }
    verdict(8, fails, format!("eigen relations to order 10, certificate at (3/10, 7/10): {}", gaps.join(", ")))
}

fn criterion_9() -> Verdict {
    let mut fails = Vec::new();
    let s = LoopSpace::new(1, 5);
    match weyl::hamiltonian_of(&s, &LoopOperator::scalar_power(1, -1, int(1))) {
        Ok(h) if h == weyl::string_hamiltonian_closed_form(5) => {}
        Ok(h) => fails.push(format!("P(z^-1) = {h}")),
        Err(e) => fails.push(e.to_string()),
    }
    let mut entries = 0;
    match weyl::cocycle_table(&LoopSpace::new(2, 3)) {
        Ok(t) => {
            entries = t.len();
            fails.extend(t.iter().filter(|e| !e.passed()).map(|e| format!("{} , {}: {}", e.first, e.second, e.value)));
        }
        Err(e) => fails.push(e.to_string()),
    }
    verdict(9, fails, format!("string hamiltonian at K=5; {entries} cocycle entries at N=2, K=3"))
}

fn main() {
    let start = Instant::now();
    let (forms, mut verdicts) = std::thread::scope(|s| {
        let h4 = s.spawn(criterion_4);
        let h67 = s.spawn(criteria_6_7);
        let h3 = s.spawn(criterion_3);
        let h8 = s.spawn(criterion_8);
        let h9 = s.spawn(criterion_9);
        let mut forms = Vec::new();
        let mut form_errors = Vec::new();
        for r in 1..=5u32 {
            let t = Instant::now();
            match genus_one_form(r, &Default::default()) {
                Ok(f) => forms.push((r, f, t.elapsed())),
                Err(e) => form_errors.push(format!("r={r}: {e}")),
            }
        }
        let mut v = Vec::new();
        let c1 = criterion_1(&forms);
        v.push(if form_errors.is_empty() { c1 } else { verdict(1, form_errors, String::new()) });
        v.push(criterion_2(&forms));
        v.push(criterion_5(&forms));
        v.push(h3.join().expect("criterion 3"));
        v.push(h4.join().expect("criterion 4"));
        let (c6, c7) = h67.join().expect("criteria 6 and 7");
        v.push(c6);
        v.push(c7);
        v.push(h8.join().expect("criterion 8"));
        v.push(h9.join().expect("criterion 9"));
        (forms, v)
    });
    drop(forms);
    verdicts.sort_by_key(|v| v.criterion);
    let mut all = true;
    for v in &verdicts {
        all &= v.ok;
        println!("criterion {}: {} ({})", v.criterion, if v.ok { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("criterion 10: EXCLUDED (global flops, relative invariants and the full ancestor potential are out of scope)");
    println!("acceptance: {} in {:.1}s", if all { "all criteria pass" } else { "FAILURES" }, start.elapsed().as_secs_f64());
    if !all {
        std::process::exit(1);
    }
}
