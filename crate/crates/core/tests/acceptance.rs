//! Exit criteria. Runs without the libtest harness so that every criterion
//! prints its own PASS/FAIL line; the process fails if any criterion does.
//! All comparisons are exact (rational arithmetic, integer weights).

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbit_incidence::exact::{rat, MultiPoly};
use orbit_incidence::germ::{
    euler_class, germ_incidence_verdict, incidence_i, parse_germ, sigma2_corpus,
    sigma2_restriction, sigma_index, unfolding_basis, xayb, GermError, SourceWeights,
};
use orbit_incidence::quiver::{
    enumerate_orbits, ext_order, ext_table, orbit_incidence_verdict, QuiverSpec,
};
use orbit_incidence::schubert::{
    closure_leq, incidence_verdict, orbit_codimension, PartialPermutation,
};
use orbit_incidence::weights::{difference_positivity, positivity, verify_functional, WeightSystem};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_xayb() -> Check {
    let mut positive = BTreeSet::new();
    let mut count = 0;
    for a in 2..=8 {
        for b in a..=8 {
            let f = xayb(a, b);
            let r = germ_incidence_verdict(&f, SourceWeights::Include).map_err(|e| e.to_string())?;
            ensure(r.certificate.verify(&r.weight_system()), || {
                format!("certificate for (x^{a}, y^{b}) does not verify")
            })?;
            let without = germ_incidence_verdict(&f, SourceWeights::Exclude).map_err(|e| e.to_string())?;
            ensure(without.incidence == r.incidence, || {
                format!("(x^{a}, y^{b}) changes verdict without source weights")
            })?;
            if r.incidence {
                positive.insert((a, b));
            }
            count += 1;
        }
    }
    let expected: BTreeSet<(u32, u32)> = [(2, 2), (2, 3), (2, 4)].into();
    ensure(positive == expected, || format!("positive set {positive:?}, expected {expected:?}"))?;
    Ok(format!("{count} germs, positive exactly {positive:?}, all certificates verify"))
}

fn criterion_iiiab() -> Check {
    for a in 2..=6u32 {
        for b in 2..=6u32 {
            let f = parse_germ(&format!("x^{a}, x*y, y^{b}"))
                .and_then(|f| f.with_jet(a + b))
                .map_err(|e| e.to_string())?;
            for sources in [SourceWeights::Include, SourceWeights::Exclude] {
                let r = germ_incidence_verdict(&f, sources).map_err(|e| e.to_string())?;
                ensure(r.incidence && r.certificate.verify(&r.weight_system()), || {
                    format!("III_{{{a},{b}}} ({sources:?}) is not certified positive")
                })?;
            }
            // Weights are written in the lattice basis; the functional is
            // stated in source coordinates, so the basis must be (1,0), (0,1).
            let lattice = orbit_incidence::germ::infer_weights(&f);
            ensure(lattice.source(0) == vec![1, 0] && lattice.source(1) == vec![0, 1], || {
                format!("unexpected lattice {:?} for III_{{{a},{b}}}", lattice.rows)
            })?;
            let r = germ_incidence_verdict(&f, SourceWeights::Include).map_err(|e| e.to_string())?;
            let lambda = [rat(b as i64), rat(a as i64)];
            ensure(verify_functional(&r.weight_system(), &lambda), || {
                format!("({b}, {a}) is not positive on III_{{{a},{b}}}")
            })?;
        }
    }
    Ok("25 germs positive, functional (b, a) positive on every weight".into())
}

fn criterion_cyclic() -> Check {
    let f = parse_germ("x^2+3*y*z, y^2+3*x*z, z^2+3*x*y")
        .and_then(|f| f.with_jet(3))
        .map_err(|e| e.to_string())?;
    for sources in [SourceWeights::Include, SourceWeights::Exclude] {
        let e = euler_class(&f, sources).map_err(|e| e.to_string())?;
        ensure(e.is_zero(), || format!("euler class {e} ({sources:?})"))?;
    }
    let u = unfolding_basis(&f);
    let weights = u.weights.clone().ok_or("no symmetry lattice")?;
    let zero: Vec<usize> = (0..u.dim())
        .filter(|&i| weights[i].iter().all(|&w| w == 0))
        .collect();
    ensure(zero.len() == 1, || format!("{} weight-0 basis elements", zero.len()))?;
    let zero_element = u.elements[zero[0]].clone();
    let vars = f.variables().to_vec();
    let family: Vec<MultiPoly> = ["y*z", "x*z", "x*y"]
        .iter()
        .map(|m| {
            parse_germ(m)
                .map(|g| g.components()[0].embed(&vars))
                .map_err(|e: GermError| e.to_string())
        })
        .collect::<Result<_, _>>()?;
    let reduced = u.reduce(&family);
    ensure(
        reduced.len() == 1 && reduced[0].0 == zero_element && !reduced[0].1.is_zero(),
        || format!("family vector reduces to {reduced:?}"),
    )?;
    let elements = u.element_strings();
    Ok(format!(
        "euler class 0; U = {} elements; weight-0 element {} represents the family (yz, xz, xy)",
        elements.len(),
        elements[zero[0]]
    ))
}

fn criterion_sigma2() -> Check {
    let corpus = sigma2_corpus(20240601, 150);
    let mut violations = Vec::new();
    let mut by_sigma = [0usize; 3];
    for g in &corpus {
        let f = &g.germ;
        ensure(f.n() == 2 && f.p() <= 3 && f.k() <= 6, || format!("({f}) outside the corpus bounds"))?;
        let sigma = sigma_index(f);
        ensure(sigma <= 2, || format!("({f}) has sigma index {sigma}"))?;
        by_sigma[sigma] += 1;
        let r = sigma2_restriction(f).map_err(|e| e.to_string())?;
        if r.polynomial.is_zero() != (sigma < 2) {
            violations.push(format!("({f}): sigma {sigma}, restriction {}", r.polynomial));
        }
    }
    ensure(violations.is_empty(), || format!("{} violations: {:?}", violations.len(), violations))?;
    Ok(format!(
        "{} germs (sigma 0/1/2: {}/{}/{}), zero violations",
        corpus.len(),
        by_sigma[0],
        by_sigma[1],
        by_sigma[2]
    ))
}

fn criterion_quiver() -> Check {
    let mut quivers = Vec::new();
    for d in ["A2", "A3"] {
        for q in QuiverSpec::all_orientations(d).map_err(|e| e.to_string())? {
            quivers.push((q, 3));
        }
    }
    quivers.push((QuiverSpec::from_diagram("D4", None).map_err(|e| e.to_string())?, 2));
    let mut orbits_checked = 0;
    for (q, bound) in &quivers {
        let label = format!("{} {}", q.kind(), q.orientation_string());
        let table = ext_table(q, 1).map_err(|e| e.to_string())?;
        let other = ext_table(q, 0xdead_beef).map_err(|e| e.to_string())?;
        ensure(table == other, || format!("{label}: ext table depends on the seed"))?;
        ensure(ext_order(&table).is_some(), || format!("{label}: Ext digraph has a cycle"))?;
        for (r, x) in table.roots.iter().enumerate() {
            for (s, y) in table.roots.iter().enumerate() {
                let lhs = table.hom[r][s] as i64 - table.ext[r][s] as i64;
                ensure(lhs == q.euler_form(x, y), || {
                    format!("{label}: hom - ext = {lhs} != <{x:?}, {y:?}>")
                })?;
            }
        }
        for mu in enumerate_orbits(&table, *bound) {
            let r = orbit_incidence_verdict(&table, &mu).map_err(|e| e.to_string())?;
            ensure(r.incidence && r.certificate.verify(&r.weight_system()), || {
                format!("{label}: orbit {} not certified positive", mu.label())
            })?;
            orbits_checked += 1;
        }
    }
    Ok(format!(
        "{} quivers, {orbits_checked} orbits positive; Ext acyclic; hom - ext = Euler form; seed independent",
        quivers.len()
    ))
}

fn criterion_schubert() -> Check {
    let mut total = 0;
    for n in 1..=3 {
        let all = PartialPermutation::all(n);
        for a in &all {
            let r = incidence_verdict(a);
            let ws = r.weight_system();
            ensure(r.incidence && r.certificate.verify(&ws), || format!("{:?} not positive", a.to_rows()))?;
            for w in ws.weights() {
                let plus: Vec<usize> = (0..w.len()).filter(|&i| w[i] == 1).collect();
                let minus: Vec<usize> = (0..w.len()).filter(|&i| w[i] == -1).collect();
                let support = w.iter().filter(|&&c| c != 0).count();
                ensure(support == 2 && plus.len() == 1 && minus.len() == 1 && plus[0] > minus[0], || {
                    format!("{:?}: weight {w:?} is not e_u - e_v with u > v", a.to_rows())
                })?;
            }
        }
        ensure(incidence_verdict(&PartialPermutation::identity(n)).weights.is_empty(), || {
            format!("identity of size {n} has normal weights")
        })?;
        let zero = PartialPermutation::zero(n);
        let leq = |a: &PartialPermutation, b: &PartialPermutation| closure_leq(a, b).map_err(|e| e.to_string());
        let codims: Vec<usize> = all.iter().map(orbit_codimension).collect();
        for (i, a) in all.iter().enumerate() {
            ensure(leq(a, a)?, || "closure order is not reflexive".into())?;
            ensure(leq(&zero, a)?, || format!("zero is not below {:?}", a.to_rows()))?;
            for (j, b) in all.iter().enumerate() {
                let ab = leq(a, b)?;
                if i != j && ab {
                    ensure(!leq(b, a)?, || "closure order is not antisymmetric".into())?;
                    ensure(codims[i] > codims[j], || {
                        format!("codim not strictly monotone from {:?} to {:?}", a.to_rows(), b.to_rows())
                    })?;
                }
                if ab {
                    for c in &all {
                        if leq(b, c)? {
                            ensure(leq(a, c)?, || "closure order is not transitive".into())?;
                        }
                    }
                }
            }
        }
        total += all.len();
    }
    Ok(format!("{total} partial permutations positive; closure order is a partial order with minimum 0"))
}

/// Positive iff some λ is strictly positive on every weight. In the plane
/// the open cone of such λ, when nonempty, contains either a weight or the
/// sum of two of its boundary rays `±w^⊥`.
fn half_plane_oracle(weights: &[[i64; 2]]) -> bool {
    if weights.contains(&[0, 0]) {
        return false;
    }
    let mut candidates: Vec<[i64; 2]> = weights.to_vec();
    let rays: Vec<[i64; 2]> = weights
        .iter()
        .flat_map(|w| [[-w[1], w[0]], [w[1], -w[0]]])
        .collect();
    for p in &rays {
        for q in &rays {
            candidates.push([p[0] + q[0], p[1] + q[1]]);
        }
    }
    weights.is_empty()
        || candidates
            .iter()
            .any(|l| weights.iter().all(|w| l[0] * w[0] + l[1] * w[1] > 0))
}

fn is_acyclic(vertices: usize, arcs: &[(usize, usize)]) -> bool {
    // 0 unvisited, 1 on stack, 2 done
    fn visit(v: usize, arcs: &[(usize, usize)], state: &mut [u8]) -> bool {
        state[v] = 1;
        for &(s, t) in arcs {
            if s == v && (state[t] == 1 || (state[t] == 0 && !visit(t, arcs, state))) {
                return false;
            }
        }
        state[v] = 2;
        true
    }
    let mut state = vec![0u8; vertices];
    (0..vertices).all(|v| state[v] != 0 || visit(v, arcs, &mut state))
}

fn criterion_oracles() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut agree = 0;
    let mut positives = 0;
    for trial in 0..200 {
        let len = rng.gen_range(0..=10);
        let weights: Vec<[i64; 2]> = (0..len)
            .map(|_| [rng.gen_range(-5..=5), rng.gen_range(-5..=5)])
            .collect();
        let ws = WeightSystem::with_rank(2, weights.iter().map(|w| w.to_vec()).collect())
            .map_err(|e| e.to_string())?;
        let cert = positivity(&ws);
        ensure(cert.verify(&ws), || format!("trial {trial}: certificate does not verify"))?;
        if cert.is_positive() == half_plane_oracle(&weights) {
            agree += 1;
        }
        positives += usize::from(cert.is_positive());
    }
    ensure(agree == 200, || format!("rank-2 systems: {agree}/200 agree with the oracle"))?;
    let mut agree_diff = 0;
    for trial in 0..100 {
        let vertices = rng.gen_range(2..=6);
        let len = rng.gen_range(1..=10);
        let arcs: Vec<(usize, usize)> = (0..len)
            .map(|_| {
                let i = rng.gen_range(0..vertices);
                let mut j = rng.gen_range(0..vertices - 1);
                if j >= i {
                    j += 1;
                }
                (i, j)
            })
            .collect();
        // weight e_i - e_j drawn as the arc j -> i
        let weights: Vec<Vec<i64>> = arcs
            .iter()
            .map(|&(i, j)| {
                let mut w = vec![0; vertices];
                w[i] = 1;
                w[j] = -1;
                w
            })
            .collect();
        let ws = WeightSystem::with_rank(vertices, weights).map_err(|e| e.to_string())?;
        let digraph: Vec<(usize, usize)> = arcs.iter().map(|&(i, j)| (j, i)).collect();
        let expected = is_acyclic(vertices, &digraph);
        let lp = positivity(&ws);
        let diff = difference_positivity(&ws, &arcs).map_err(|e| e.to_string())?;
        ensure(lp.verify(&ws) && diff.verify(&ws), || format!("difference trial {trial}: bad certificate"))?;
        if lp.is_positive() == expected && diff.is_positive() == expected {
            agree_diff += 1;
        }
    }
    ensure(agree_diff == 100, || format!("difference systems: {agree_diff}/100 agree with acyclicity"))?;
    Ok(format!(
        "200/200 rank-2 systems match the half-plane oracle ({positives} positive); 100/100 difference systems match acyclicity"
    ))
}

fn criterion_incidence_i() -> Check {
    let mut failures = Vec::new();
    let first = incidence_i(2, 3, 2, 2).map_err(|e| e.to_string())?;
    if first.coefficient != rat(144) {
        failures.push(format!("(2,3,2,2) gives {}, expected 144", first.coefficient));
    }
    let second = incidence_i(2, 4, 2, 3).map_err(|e| e.to_string())?;
    if second.coefficient != rat(768) {
        failures.push(format!("(2,4,2,3) gives {}, expected 768", second.coefficient));
    }
    if second.dropped_terms != 1 {
        failures.push(format!("(2,4,2,3) dropped {} terms, expected 1", second.dropped_terms));
    }
    for bad in [(1, 3, 2, 2), (3, 2, 2, 2), (2, 2, 2, 2), (2, 3, 1, 2), (2, 3, 3, 2), (2, 3, 2, 3)] {
        if !matches!(
            incidence_i(bad.0, bad.1, bad.2, bad.3),
            Err(GermError::PreconditionViolated(_))
        ) {
            failures.push(format!("{bad:?} accepted"));
        }
    }
    if failures.is_empty() {
        Ok("144 at (2,3,2,2), 768 at (2,4,2,3) with one dropped term; preconditions enforced".into())
    } else {
        Err(failures.join("; "))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 monomial germs (x^a, y^b)", criterion_xayb),
        ("2 III_{a,b} positivity", criterion_iiiab),
        ("3 zero Euler class of the cyclic germ", criterion_cyclic),
        ("4 Sigma^2 restriction vanishing", criterion_sigma2),
        ("5 Dynkin quiver orbits", criterion_quiver),
        ("6 double-Borel orbits", criterion_schubert),
        ("7 positivity oracles", criterion_oracles),
        ("8 incidence coefficients of I_{c,d}", criterion_incidence_i),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} ({secs:.2}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} ({secs:.2}s)");
            }
        }
    }
    println!("{} of 8 criteria pass", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
