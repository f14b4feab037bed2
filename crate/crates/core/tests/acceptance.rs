use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::{mpsc, Arc};
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slicegb::family::{
    family_section, param_gb, params_independent, sigma_denominator, sigma_scheme, specialize_fiber, FamilyError,
};
use slicegb::field::{int, rat};
use slicegb::groebner::{
    dimension, is_groebner, is_zero_divisor, reduced_groebner, s_polynomial, GroebnerBasis, Ideal, MonomialIdeal,
};
use slicegb::hough::{
    generic_hough_dimension, hough_ideal, image_ideal, reconstruct_surface, solve_linear_hough, Observation,
    SliceObservation,
};
use slicegb::section::{
    common_lifting, homogeneous_section_gb, implicitize, reconstruct_gb, section_gb, verify_lifting, HomLinearForm,
    ImplicitMode, LinearForm, MembershipOracle, SectionError, SliceFamily, SliceOptions,
};
use slicegb::text::parse_polynomial;
use slicegb::{Family, PowerProduct, QPoly, Rational, RationalFunction, RingSpec, TermOrder};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn ring(names: &[&str]) -> Arc<RingSpec> {
    RingSpec::new(names).unwrap()
}

fn xring(n: usize) -> Arc<RingSpec> {
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    RingSpec::new(&names).unwrap()
}

fn q(r: &Arc<RingSpec>, s: &str) -> QPoly {
    parse_polynomial(r, s).unwrap()
}

fn qs(r: &Arc<RingSpec>, list: &[&str]) -> Vec<QPoly> {
    list.iter().map(|s| q(r, s)).collect()
}

fn rf(r: &Arc<RingSpec>, num: &str, den: &str) -> RationalFunction {
    RationalFunction::new(q(r, num), q(r, den))
}

fn family(params: &[&str], vars: &[&str], gens: &[&str]) -> Family {
    let p = ring(params);
    let v = ring(vars);
    let joined = p.join(&v).unwrap();
    Family::new(&p, &v, gens.iter().map(|g| q(&joined, g)).collect()).unwrap()
}

fn pt(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

fn same_set(a: &[QPoly], b: &[QPoly]) -> bool {
    a.len() == b.len() && a.iter().all(|x| b.contains(x))
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

fn within(secs: f64, limit: f64, what: &str) -> Result<(), String> {
    if secs < limit {
        Ok(())
    } else {
        Err(format!("{what} took {secs:.2} s (limit {limit} s)"))
    }
}

fn criterion_1() -> Outcome {
    let (first, t1) = timed(|| -> Result<(), String> {
        let r = ring(&["x", "y", "z", "w"]);
        let ideal = Ideal::new(&r, qs(&r, &["z^2 - x*w", "x^2*y - z*w^2"])).unwrap();
        let form = HomLinearForm::new(&r, 2, vec![(1, int(3)), (3, int(1))]).unwrap();
        let gb = homogeneous_section_gb(&ideal, &form, &TermOrder::XiDegRev(2)).map_err(|e| e.to_string())?;
        let expected = qs(
            &r.without(2),
            &[
                "y^2 - 1/9*x*w + 2/3*y*w + 1/9*w^2",
                "x^2*y - 3*y*w^2 - w^3",
                "x^3*w - x^2*w^2 - 3*x*w^3 - 9*y*w^3 - 3*w^4",
            ],
        );
        ensure!(
            same_set(gb.elements(), &expected),
            "section of the quadric pair: {:?}",
            gb.elements()
        );
        Ok(())
    });
    first?;
    within(t1, 1.0, "first example")?;

    let (second, t2) = timed(|| -> Result<(), String> {
        let r = ring(&["x0", "x1", "x2", "x3"]);
        let order = TermOrder::XiDegRev(0);
        let ideal = Ideal::new(
            &r,
            qs(
                &r,
                &["x3^3 - x1*x2*x0", "x2^3 - x1*x3*x0 - x2*x0^2", "x1^2*x2 - x3*x0^2"],
            ),
        )
        .unwrap();
        let gb = reduced_groebner(&order, &ideal).map_err(|e| e.to_string())?;
        let expected = qs(
            &r,
            &[
                "x3^3 - x1*x2*x0",
                "x2^3 - x1*x3*x0 - x2*x0^2",
                "x1^2*x2 - x3*x0^2",
                "x1^3*x3*x0 - x2^2*x3*x0^2 + x3*x0^4",
            ],
        );
        ensure!(same_set(gb.elements(), &expected), "reduced basis: {:?}", gb.elements());
        let form = HomLinearForm::new(&r, 0, vec![]).unwrap();
        let section = homogeneous_section_gb(&ideal, &form, &order).map_err(|e| e.to_string())?;
        ensure!(
            form.apply(&expected[3]).is_zero(),
            "fourth element survives the section"
        );
        ensure!(
            same_set(section.elements(), &qs(&r.without(0), &["x3^3", "x2^3", "x1^2*x2"])),
            "section: {:?}",
            section.elements()
        );
        Ok(())
    });
    second?;
    within(t2, 1.0, "four-element example")?;
    Ok(format!("both sections exact ({t1:.3} s, {t2:.3} s)"))
}

fn criterion_2() -> Outcome {
    let r = xring(4);
    let ideal = Ideal::new(&r, qs(&r, &["x2*x3 - x4", "x1^3 - 2*x3^2"])).unwrap();
    let order = TermOrder::DegRevLex;
    let gb = reduced_groebner(&order, &ideal).unwrap();
    let form = LinearForm::new(&r, 0, vec![(2, int(1)), (3, int(1))], int(0)).unwrap();
    match section_gb(&gb, &form) {
        Err(SectionError::HypothesisViolation(_)) => {}
        other => return Err(format!("expected HypothesisViolation, got {other:?}")),
    }
    let hat = form.section_ring();
    let images: Vec<QPoly> = ideal.generators().iter().map(|g| form.apply(g)).collect();
    let direct = reduced_groebner(&order.restrict(0, 4), &Ideal::new(&hat, images).unwrap()).unwrap();
    let f3 = q(&hat, "x2*x4^3 + x3^2*x4 + 3*x3*x4^2 + 3*x4^3 - 2*x3*x4");
    ensure!(
        direct.elements().contains(&f3),
        "recomputed basis lacks f3: {:?}",
        direct.elements()
    );
    Ok("HypothesisViolation raised; recomputation finds f3".into())
}

fn criterion_3() -> Outcome {
    let r = xring(4);
    let order = TermOrder::DegRevLex;
    let g = qs(&r, &["x1^2", "x1*x3 - x2", "x1*x4", "x4^2"]);
    let ideal = Ideal::new(&r, g.clone()).unwrap();
    let form = LinearForm::new(&r, 1, vec![(3, int(1))], int(0)).unwrap();
    let verdict = verify_lifting(&ideal, &g, &form, &order);
    ensure!(
        verdict == Err(SectionError::ZeroDivisor),
        "expected ZeroDivisor, got {verdict:?}"
    );
    let gb = reduced_groebner(&order, &ideal).unwrap();
    for m in qs(&r, &["x1*x2", "x2^2"]) {
        ensure!(gb.elements().contains(&m), "reduced basis lacks {m:?}");
    }

    let g = qs(&r, &["x2^3 + x1*x3 - x2*x3", "x3"]);
    let ideal = Ideal::new(&r, g.clone()).unwrap();
    let form = LinearForm::new(&r, 0, vec![(1, int(1))], int(0)).unwrap();
    let lifted = verify_lifting(&ideal, &g, &form, &order).map_err(|e| format!("notreduced: {e:?}"))?;
    ensure!(is_groebner(&order, lifted.elements()), "certified set is not a basis");
    ensure!(!lifted.is_reduced(), "certified set is unexpectedly reduced");
    Ok("ZeroDivisor detected; non-reduced basis certified".into())
}

fn random_terms(rng: &mut ChaCha8Rng, n: usize, max_deg: u32, max_terms: usize) -> Vec<(Vec<u32>, i64)> {
    let count = rng.gen_range(1..=max_terms);
    (0..count)
        .map(|_| {
            let mut e: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=max_deg)).collect();
            while e.iter().sum::<u32>() > max_deg {
                let k = e.iter().position(|&x| x > 0).unwrap();
                e[k] -= 1;
            }
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-5..=5);
            }
            (e, c)
        })
        .collect()
}

fn poly_from(r: &Arc<RingSpec>, terms: &[(Vec<u32>, i64)]) -> QPoly {
    QPoly::from_terms(r, terms.iter().map(|(e, c)| (PowerProduct::from_exponents(e), int(*c))))
}

fn random_poly(rng: &mut ChaCha8Rng, r: &Arc<RingSpec>, max_deg: u32, max_terms: usize) -> QPoly {
    poly_from(r, &random_terms(rng, r.arity(), max_deg, max_terms))
}

fn random_ideal(rng: &mut ChaCha8Rng, r: &Arc<RingSpec>) -> Ideal {
    let count = rng.gen_range(1..=3);
    Ideal::new(r, (0..count).map(|_| random_poly(rng, r, 3, 3)).collect()).unwrap()
}

/// Distinct small offsets.
fn random_gammas(rng: &mut ChaCha8Rng, count: usize) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::with_capacity(count);
    while out.len() < count {
        let g = rat(rng.gen_range(-12..=12), rng.gen_range(1..=3));
        if !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

/// Sample a polynomial on `deg + 1 + extra` parallel slices and recover it.
fn common_lifting_case(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = rng.gen_range(1..=4);
    let r = xring(n);
    let pivot = rng.gen_range(0..n);
    let pivot_degree = rng.gen_range(0..=5);
    let mut terms: Vec<(Vec<u32>, i64)> = random_terms(rng, n, 3, 4)
        .into_iter()
        .map(|(mut e, c)| {
            e[pivot] = e[pivot].min(pivot_degree);
            (e, c)
        })
        .collect();
    let mut top = vec![0; n];
    top[pivot] = pivot_degree;
    terms.push((top, 1));
    let g = poly_from(&r, &terms);
    if g.is_zero() {
        return Ok(());
    }
    let tail: Vec<(usize, Rational)> = (pivot + 1..n).map(|j| (j, int(rng.gen_range(-2..=2)))).collect();
    let count = g.degree_in(pivot) as usize + 1 + rng.gen_range(0..=2);
    let family = SliceFamily::new(&r, pivot, tail, random_gammas(rng, count)).unwrap();
    let values: Vec<QPoly> = (0..family.len()).map(|k| family.form(k).apply(&g)).collect();
    let lifted = common_lifting(&family, &values).map_err(|e| e.to_string())?;
    ensure!(lifted == g, "recovered {lifted:?} instead of {g:?}");
    Ok(())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let r = ring(&["x", "y"]);
    let family = SliceFamily::new(&r, 1, vec![], pt(&[0, 1, 2])).unwrap();
    let hat = family.section_ring();
    let g = common_lifting(&family, &qs(&hat, &["x", "x + 1", "x + 4"])).map_err(|e| e.to_string())?;
    ensure!(g == q(&r, "y^2 + x"), "three lines lift to {g:?}");
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cases = 256;
    for k in 0..cases {
        common_lifting_case(&mut rng).map_err(|e| format!("instance {k}: {e}"))?;
    }
    within(start.elapsed().as_secs_f64(), 30.0, "common lifting")?;
    Ok(format!("y^2 + x recovered; {cases} random instances"))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let r = ring(&["x", "y", "z"]);
    let gammas = pt(&[-5, -4, -3, -2, 2, 3, 4, 5]);
    let family = SliceFamily::new(&r, 1, vec![], gammas.clone()).unwrap();
    let hat = family.section_ring();
    let order = TermOrder::Lex;
    let hat_order = order.restrict(1, 3);
    let bases: Vec<GroebnerBasis> = gammas
        .iter()
        .map(|g| {
            let c = -(g * g * g) * (int(1) - g) * (int(1) - g) * (int(1) - g);
            let f = &q(&hat, "x^2 + z^2") + &QPoly::constant(&hat, c);
            reduced_groebner(&hat_order, &Ideal::new(&hat, vec![f]).unwrap()).unwrap()
        })
        .collect();
    let rec = reconstruct_gb(&family, &bases, &order, &MembershipOracle::Trust).map_err(|e| e.to_string())?;
    let expected = q(&r, "x^2 + z^2 - y^3 + 3*y^4 - 3*y^5 + y^6");
    ensure!(
        rec.basis.elements() == [expected],
        "reconstructed {:?}",
        rec.basis.elements()
    );
    within(start.elapsed().as_secs_f64(), 5.0, "reconstruction")?;
    Ok("x^2+z^2-y^3+3y^4-3y^5+y^6 from 8 slices".into())
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let order = TermOrder::DegRevLex;

    let f = family(
        &["a1", "a2", "a3"],
        &["x", "y", "z", "w"],
        &["a1*x*y - a2*y^2 - w", "a2*x^2 + a3*y^2 + z^2"],
    );
    let p = f.params().clone();
    let d = "a2^3 + a1^2*a3";
    let gb = param_gb(&f, &order).map_err(|e| e.to_string())?;
    let v = f.vars().clone();
    let f3 = &gb.elements()[2];
    let coeff = |r: &Arc<RingSpec>, g: &slicegb::ParamPoly, t: &str| {
        g.coefficient(q(r, t).leading_term(&order).unwrap()).cloned()
    };
    ensure!(coeff(&v, f3, "y^3") == Some(rf(&p, "1", "1")), "F3 is not monic in y^3");
    ensure!(
        coeff(&v, f3, "y*z^2") == Some(rf(&p, "a1^2", d)),
        "F3 y*z^2 coefficient"
    );
    ensure!(coeff(&v, f3, "x*w") == Some(rf(&p, "a1*a2", d)), "F3 x*w coefficient");
    ensure!(coeff(&v, f3, "y*w") == Some(rf(&p, "a2^2", d)), "F3 y*w coefficient");
    ensure!(f3.num_terms() == 4, "F3 has {} terms", f3.num_terms());

    let form = LinearForm::new(&v, 2, vec![(3, int(1))], int(-1)).unwrap();
    let cut = family_section(&f, &form, &order).map_err(|e| e.to_string())?;
    let basis = cut.report.basis.clone().ok_or("section hypothesis fails")?;
    let hat = form.section_ring();
    let g3 = &basis.elements()[2];
    ensure!(
        coeff(&hat, g3, "y^3") == Some(rf(&p, "1", "1")),
        "sectioned F3 is not monic in y^3"
    );
    ensure!(
        coeff(&hat, g3, "y*w^2") == Some(rf(&p, "a1^2", d)),
        "sectioned y*w^2 coefficient"
    );
    ensure!(
        coeff(&hat, g3, "x*w") == Some(rf(&p, "a1*a2", d)),
        "sectioned x*w coefficient"
    );
    ensure!(
        coeff(&hat, g3, "y*w") == Some(rf(&p, "a2^2 - 2*a1^2", d)),
        "sectioned y*w coefficient"
    );
    ensure!(
        coeff(&hat, g3, "y") == Some(rf(&p, "a1^2", d)),
        "sectioned y coefficient"
    );
    ensure!(g3.num_terms() == 5, "sectioned F3 has {} terms", g3.num_terms());

    let cone = family(&["a1", "a2"], &["x", "y"], &["x^2 + a1^2*x + a1*a2*y + a2^2"]);
    let scheme = sigma_scheme(&param_gb(&cone, &order).map_err(|e| e.to_string())?, true).map_err(|e| e.to_string())?;
    let y = scheme.ring.clone().ok_or("sigma scheme has no ring")?;
    let implicit = scheme.implicit.clone().ok_or("no implicit ideal")?;
    ensure!(
        implicit.generators() == [q(&y, "y2^2 - y1*y3")],
        "implicit ideal {:?}",
        implicit.generators()
    );
    ensure!(
        scheme.dimension == Some(2),
        "sigma scheme dimension {:?}",
        scheme.dimension
    );

    let nd = family(&["a1", "a2"], &["x", "y"], &["x^2 - a1*y", "y^2 - a2"]);
    let form = LinearForm::new(nd.vars(), 0, vec![(1, int(1))], int(0)).unwrap();
    let cut = family_section(&nd, &form, &order).map_err(|e| e.to_string())?;
    let witness = q(nd.params(), "a1^2*a2 - a2^2");
    ensure!(
        cut.independence.witness.as_ref() == Some(&witness),
        "dependence witness {:?}",
        cut.independence.witness
    );
    ensure!(
        !cut.independence.independent,
        "sectioned parameters reported independent"
    );

    let vert = family(
        &["a1", "a2"],
        &["z", "y", "x"],
        &["(x^2+y^2)^3 - (a1*(x^2+y^2) - a2*(x^3-3*x*y^2))^2", "a1*z - a2*x"],
    );
    let gb = param_gb(&vert, &order).map_err(|e| e.to_string())?;
    ensure!(
        sigma_denominator(&gb) == q(vert.params(), "a1"),
        "denominator {:?}",
        sigma_denominator(&gb)
    );
    within(start.elapsed().as_secs_f64(), 10.0, "family layer")?;
    Ok("coefficients, section, sigma scheme, witness and denominator exact".into())
}

/// Number of monomials outside the leading-term ideal, when finite and small.
fn standard_monomials(gb: &GroebnerBasis, bound: u32) -> usize {
    let lts = gb.leading_terms();
    let n = gb.ring().arity();
    let mut count = 0;
    let mut e = vec![0u32; n];
    loop {
        let t = PowerProduct::from_exponents(&e);
        if !lts.iter().any(|l| l.divides(&t)) {
            count += 1;
        }
        let mut k = 0;
        while k < n {
            e[k] += 1;
            if e[k] <= bound {
                break;
            }
            e[k] = 0;
            k += 1;
        }
        if k == n {
            return count;
        }
    }
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let lines = family(&["a1", "a2"], &["x1", "x2"], &["x2 + a1*x1 + a2"]);
    let d = generic_hough_dimension(&lines).map_err(|e| e.to_string())?;
    ensure!(d.generic == 1, "line-points generic dimension {}", d.generic);

    let nd = family(
        &["a1", "a2"],
        &["x1", "x2"],
        &["x1^2 - x1", "x1*x2 - x2", "x2^2 + a1*a2*x1 - (a1+a2)*x2"],
    );
    let image = image_ideal(&nd).map_err(|e| e.to_string())?;
    let x = nd.vars().clone();
    let image_gb = reduced_groebner(&TermOrder::DegRevLex, &image).unwrap();
    let expected = reduced_groebner(
        &TermOrder::DegRevLex,
        &Ideal::new(&x, qs(&x, &["x1^2 - x1", "x1*x2 - x2"])).unwrap(),
    )
    .unwrap();
    ensure!(image_gb == expected, "image ideal {:?}", image.generators());
    let h0 = hough_ideal(&nd, &pt(&[0, 0])).map_err(|e| e.to_string())?;
    ensure!(h0.dimension == 2, "transform of (0,0) has dimension {}", h0.dimension);
    for c in [-3, 0, 1, 2, 7] {
        let h = hough_ideal(&nd, &pt(&[1, c])).map_err(|e| e.to_string())?;
        ensure!(h.dimension == 1, "transform of (1,{c}) has dimension {}", h.dimension);
    }

    let vert = family(
        &["a1", "a2"],
        &["z", "y", "x"],
        &["(x^2+y^2)^3 - (a1*(x^2+y^2) - a2*(x^3-3*x*y^2))^2", "a1*z - a2*x"],
    );
    let d = generic_hough_dimension(&vert).map_err(|e| e.to_string())?;
    ensure!(d.generic == 0, "vertebral generic dimension {}", d.generic);
    let h = hough_ideal(&vert, &pt(&[1, 1, 1])).map_err(|e| e.to_string())?;
    ensure!(h.dimension == 0, "transform of (1,1,1) has dimension {}", h.dimension);
    let count = standard_monomials(&h.ideal, 8);
    ensure!(count == 2, "transform of (1,1,1) has {count} standard monomials");

    let vert2 = family(
        &["a1", "a2"],
        &["x", "y", "z"],
        &["(x^2+y^2)^3 - a1*((x^2+y^2) - (x^3-3*x*y^2))^2", "z - a2*x"],
    );
    let alpha = solve_linear_hough(&vert2, &pt(&[1, 1, 2])).map_err(|e| e.to_string())?;
    ensure!(alpha == vec![rat(1, 2), int(2)], "solution {alpha:?}");
    within(start.elapsed().as_secs_f64(), 10.0, "Hough layer")?;
    Ok("dimensions 1, 2/1, 0 and solution (1/2, 2)".into())
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let template = family(
        &["a1", "a2", "a3", "a4"],
        &["x", "y"],
        &["x^3 - a1*y^2 + a2*x + a3*y + a4"],
    );
    let target = ring(&["x", "y", "z"]);
    let v = template.vars().clone();
    let slices: Vec<SliceObservation> = [
        (0, "x^3 - y^2"),
        (1, "x^3 - y^2 - x - y - 1"),
        (-1, "x^3 - y^2 + x + y + 1"),
        (2, "x^3 - y^2 - 2*x - 2*y - 2"),
    ]
    .iter()
    .map(|(g, c)| SliceObservation {
        gamma: int(*g),
        observation: Observation::Curve(q(&v, c)),
    })
    .collect();
    let f = reconstruct_surface(
        &template,
        &slices,
        &target,
        2,
        &TermOrder::DegRevLex,
        &MembershipOracle::Trust,
    )
    .map_err(|e| e.to_string())?;
    ensure!(f == q(&target, "x^3 - x*z - y^2 - y*z - z"), "surface {f:?}");
    within(start.elapsed().as_secs_f64(), 5.0, "surface reconstruction")?;
    Ok("x^3 - x*z - y^2 - y*z - z".into())
}

fn orders() -> Vec<TermOrder> {
    vec![
        TermOrder::DegRevLex,
        TermOrder::DegLex,
        TermOrder::Lex,
        TermOrder::XiDegRev(0),
    ]
}

fn gb_case(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let r = xring(3);
    let ideal = random_ideal(rng, &r);
    let reference = reduced_groebner(&TermOrder::Lex, &ideal).unwrap();
    for order in orders() {
        let gb = reduced_groebner(&order, &ideal).unwrap();
        ensure!(gb.is_reduced(), "basis not reduced");
        for (i, f) in gb.elements().iter().enumerate() {
            for g in &gb.elements()[i + 1..] {
                ensure!(
                    gb.normal_form(&s_polynomial(&order, f, g)).is_zero(),
                    "S-pair does not reduce to zero"
                );
            }
        }
        let again = reduced_groebner(&order, &gb.to_ideal()).unwrap();
        ensure!(again.elements() == gb.elements(), "reduced basis is not idempotent");
        ensure!(
            ideal.generators().iter().all(|g| gb.contains(g)),
            "generator not a member"
        );
        ensure!(
            reference.elements().iter().all(|g| gb.contains(g)) && gb.elements().iter().all(|g| reference.contains(g)),
            "bases for different orders span different ideals"
        );
    }
    // a shuffled, redundant generating set gives the same basis
    let mut gens = ideal.generators().to_vec();
    let h = random_poly(rng, &r, 1, 2);
    gens.push(&(&h * &gens[0]) + &gens[gens.len() - 1]);
    gens.reverse();
    let other = reduced_groebner(&TermOrder::DegRevLex, &Ideal::new(&r, gens).unwrap()).unwrap();
    ensure!(
        other.elements() == reduced_groebner(&TermOrder::DegRevLex, &ideal).unwrap().elements(),
        "reduced basis depends on the generators"
    );
    Ok(())
}

/// `Ok(false)` when the sample does not meet the hypotheses.
fn round_trip_case(rng: &mut ChaCha8Rng) -> Result<bool, String> {
    let r = xring(3);
    let ideal = random_ideal(rng, &r);
    let order = TermOrder::DegRevLex;
    let gb = reduced_groebner(&order, &ideal).unwrap();
    if gb.is_unit() {
        return Ok(false);
    }
    let lts = gb.leading_terms();
    let Some(pivot) = (0..3).rev().find(|&i| lts.iter().all(|t| t.log(i) == 0)) else {
        return Ok(false);
    };
    let hat = order.restrict(pivot, 3);
    let needed = gb.elements().iter().map(|g| g.degree_in(pivot)).max().unwrap_or(0) as usize + 1;
    let offset: i64 = rng.gen_range(-3..=3);
    let gammas: Vec<Rational> = (0..needed as i64).map(|k| int(k + offset)).collect();
    let family = SliceFamily::new(&r, pivot, Vec::new(), gammas).unwrap();
    let mut bases = Vec::new();
    for k in 0..family.len() {
        let form = family.form(k);
        let sectioned = section_gb(&gb, &form).map_err(|e| e.to_string())?.basis.unwrap();
        let images: Vec<QPoly> = ideal.generators().iter().map(|f| form.apply(f)).collect();
        let direct = reduced_groebner(&hat, &Ideal::new(&form.section_ring(), images).unwrap()).unwrap();
        ensure!(
            sectioned.elements() == direct.elements(),
            "section differs from the recomputed basis"
        );
        bases.push(direct);
    }
    let rec =
        reconstruct_gb(&family, &bases, &order, &MembershipOracle::GbCheck(gb.clone())).map_err(|e| e.to_string())?;
    ensure!(
        rec.certified && rec.basis.elements() == gb.elements(),
        "reconstruction differs"
    );
    let form = family.form(0);
    match verify_lifting(&ideal, gb.elements(), &form, &order) {
        Ok(basis) => ensure!(basis.elements() == gb.elements(), "certified basis differs"),
        Err(SectionError::ZeroDivisor) => {
            ensure!(
                is_zero_divisor(&form.polynomial(), &ideal).unwrap(),
                "spurious ZeroDivisor"
            )
        }
        Err(e) => return Err(format!("unexpected {e:?}")),
    }
    Ok(true)
}

fn brute_force_dimension(n: usize, gens: &[PowerProduct]) -> i64 {
    if gens.iter().any(PowerProduct::is_one) {
        return -1;
    }
    (0u32..1 << n)
        .filter(|mask| gens.iter().all(|g| g.support().any(|j| mask & (1 << j) == 0)))
        .map(|mask| mask.count_ones() as i64)
        .max()
        .unwrap()
}

fn dimension_case(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = rng.gen_range(1..=5);
    let count = rng.gen_range(1..=5);
    let gens: Vec<PowerProduct> = (0..count)
        .map(|_| PowerProduct::from_exponents(&(0..n).map(|_| rng.gen_range(0..=2)).collect::<Vec<u32>>()))
        .collect();
    let expected = brute_force_dimension(n, &gens);
    ensure!(
        MonomialIdeal::new(n, &gens).dimension() == expected,
        "monomial dimension of {gens:?}"
    );
    let r = xring(n);
    let ideal = Ideal::new(
        &r,
        gens.iter().map(|t| QPoly::monomial(&r, t.clone(), int(1))).collect(),
    )
    .unwrap();
    ensure!(
        dimension(&ideal, &TermOrder::DegRevLex).unwrap() == expected,
        "ideal dimension of {gens:?}"
    );
    Ok(())
}

/// Leading coefficients in `Q[a]` of a basis eliminating `x` first.
fn block_leading_coefficients(f: &Family) -> Vec<QPoly> {
    let (m, n) = (f.params().arity(), f.vars().arity());
    let names: Vec<&str> = f
        .vars()
        .names()
        .iter()
        .chain(f.params().names())
        .map(String::as_str)
        .collect();
    let swapped = RingSpec::new(&names).unwrap();
    let map: Vec<usize> = (0..m + n).map(|i| if i < m { n + i } else { i - m }).collect();
    let gens = f.generators().iter().map(|g| g.remap(&swapped, &map)).collect();
    let order = TermOrder::elimination(n);
    let gb = reduced_groebner(&order, &Ideal::new(&swapped, gens).unwrap()).unwrap();
    gb.elements()
        .iter()
        .map(|g| {
            let lt = g.leading_term(&order).unwrap();
            let terms = g
                .terms()
                .filter(|(t, _)| t.exponents()[..n] == lt.exponents()[..n])
                .map(|(t, c)| (PowerProduct::from_exponents(&t.exponents()[n..]), c.clone()));
            QPoly::from_terms(f.params(), terms)
        })
        .collect()
}

fn random_family(rng: &mut ChaCha8Rng) -> Family {
    let p = ring(&["a1", "a2"]);
    let v = ring(&["x", "y"]);
    let joined = p.join(&v).unwrap();
    let gens = (0..2)
        .map(|_| {
            let mut out = QPoly::zero(&joined);
            for _ in 0..rng.gen_range(1..=3) {
                let mut coeff = QPoly::constant(&joined, int(rng.gen_range(-2..=2)));
                for j in 0..2 {
                    coeff = &coeff + &QPoly::var(&joined, j).scale(&int(rng.gen_range(-2..=2)));
                }
                let e = [0, 0, rng.gen_range(0..=2), rng.gen_range(0..=2)];
                out = &out + &(&coeff * &QPoly::monomial(&joined, PowerProduct::from_exponents(&e), int(1)));
            }
            out
        })
        .collect();
    Family::new(&p, &v, gens).unwrap()
}

/// `Ok(false)` when the point is outside the certified set.
fn specialization_case(rng: &mut ChaCha8Rng) -> Result<bool, String> {
    let f = random_family(rng);
    let alpha: Vec<Rational> = (0..2).map(|_| int(rng.gen_range(-3..=3))).collect();
    let order = TermOrder::DegRevLex;
    let gb = match param_gb(&f, &order) {
        Ok(gb) => gb,
        Err(FamilyError::DependentParameters) => {
            ensure!(
                !params_independent(&f).unwrap().independent,
                "dependence not confirmed by elimination"
            );
            return Ok(false);
        }
        Err(e) => return Err(e.to_string()),
    };
    if sigma_denominator(&gb).evaluate(&alpha).is_zero()
        || block_leading_coefficients(&f)
            .iter()
            .any(|c| c.evaluate(&alpha).is_zero())
    {
        return Ok(false);
    }
    let special = specialize_fiber(&gb, &alpha).map_err(|e| e.to_string())?;
    let direct = reduced_groebner(&order, &f.fiber(&alpha).unwrap()).unwrap();
    ensure!(
        special.elements() == direct.elements(),
        "specialized basis differs from the fiber basis"
    );
    ensure!(
        special.leading_terms() == gb.basis().leading_terms(),
        "leading terms move"
    );
    Ok(true)
}

fn count_accepted(
    rng: &mut ChaCha8Rng,
    wanted: usize,
    attempts: usize,
    mut case: impl FnMut(&mut ChaCha8Rng) -> Result<bool, String>,
) -> Result<usize, String> {
    let mut accepted = 0;
    for k in 0..attempts {
        if case(rng).map_err(|e| format!("sample {k}: {e}"))? {
            accepted += 1;
            if accepted == wanted {
                return Ok(accepted);
            }
        }
    }
    Err(format!(
        "only {accepted} of {wanted} samples met the hypotheses in {attempts} draws"
    ))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let gb_cases = 60;
    for k in 0..gb_cases {
        gb_case(&mut rng).map_err(|e| format!("basis sample {k}: {e}"))?;
    }
    let trips = count_accepted(&mut rng, 100, 20_000, round_trip_case)?;
    let dims = 128;
    for k in 0..dims {
        dimension_case(&mut rng).map_err(|e| format!("monomial sample {k}: {e}"))?;
    }
    let specs = count_accepted(&mut rng, 50, 20_000, specialization_case)?;
    Ok(format!(
        "{gb_cases} bases x 4 orders, {trips} round trips, {dims} dimensions, {specs} specializations"
    ))
}

fn elimination_budget() -> Duration {
    let secs = std::env::var("SLICEGB_ELIMINATION_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse::<f64>().ok())
        .unwrap_or(60.0);
    Duration::from_secs_f64(secs)
}

fn criterion_10() -> Outcome {
    let params = ring(&["s", "t"]);
    let target = ring(&["x", "y", "z"]);
    let coords = qs(&params, &["s^5 - s*t^3 - t", "s*t^2 - s", "s^4 - t^2"]);
    let (sliced, slice_secs) = timed(|| implicitize(&coords, &target, &ImplicitMode::Slice(SliceOptions::new(2))));
    let sliced = sliced.map_err(|e| format!("slice mode: {e}"))?;
    let degree = sliced.total_degree().unwrap_or(0);
    ensure!(
        degree == 14 && sliced.num_terms() == 319,
        "slice mode gives degree {degree} with {} terms",
        sliced.num_terms()
    );

    let budget = elimination_budget();
    let (tx, rx) = mpsc::channel();
    let (c, t) = (coords.clone(), target.clone());
    std::thread::spawn(move || {
        let start = Instant::now();
        let out = implicitize(&c, &t, &ImplicitMode::Eliminate);
        let _ = tx.send((out, start.elapsed().as_secs_f64()));
    });
    match rx.recv_timeout(budget) {
        Ok((Ok(eliminated), elim_secs)) => {
            ensure!(eliminated == sliced, "eliminate and slice modes disagree");
            if slice_secs > elim_secs {
                return Err(format!(
                    "slice mode {slice_secs:.2} s slower than elimination {elim_secs:.2} s"
                ));
            }
            Ok(format!(
                "degree 14, 319 terms; slice {slice_secs:.2} s, eliminate {elim_secs:.2} s, ratio {:.1}",
                elim_secs / slice_secs
            ))
        }
        Ok((Err(e), _)) => Err(format!("eliminate mode: {e}")),
        Err(_) => Ok(format!(
            "degree 14, 319 terms in {slice_secs:.2} s; elimination unfinished after {:.0} s",
            budget.as_secs_f64()
        )),
    }
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("homogeneous section", criterion_1),
        ("section hypothesis control", criterion_2),
        ("lifting controls", criterion_3),
        ("common lifting", criterion_4),
        ("slice reconstruction", criterion_5),
        ("family layer", criterion_6),
        ("Hough layer", criterion_7),
        ("surface reconstruction", criterion_8),
        ("property suites", criterion_9),
        ("slice implicitization", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{secs:.2} s]: {detail}", k + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{secs:.2} s]: {reason}", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
    std::process::exit(0);
}
