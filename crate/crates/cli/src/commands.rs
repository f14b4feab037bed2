use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};
use slicegb::family::{
    family_section, ncc_list, param_gb, params_independent, sigma_denominator, sigma_scheme, Family,
};
use slicegb::field::Field;
use slicegb::formats::{
    format_point, parse_hom_linear_form, parse_linear_form, parse_point, read_detect, read_family, read_ideal,
    read_parametrization, read_slices, FamilyFile, IdealFile, SliceFile,
};
use slicegb::groebner::{colon_ideal, dimension, eliminate, reduced_groebner, GroebnerBasis, Ideal};
use slicegb::hough::{detect, generic_hough_dimension, hough_ideal, reconstruct_surface, DetectionResult};
use slicegb::section::{
    common_lifting, homogeneous_section_gb, implicitize, reconstruct_gb, section_gb, seed_from_env, verify_lifting,
    ImplicitMode, MembershipOracle, SliceFamily, SliceOptions,
};
use slicegb::text::{parse_polynomial, print_polynomial};
use slicegb::{Polynomial, RingSpec, TermOrder};

use crate::outcome::{CliError, Output};
use crate::{Command, Global, Mode};

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn order_for(global: &Global, ring: &RingSpec, fallback: Option<TermOrder>) -> Result<TermOrder, CliError> {
    match &global.order {
        Some(name) => TermOrder::parse(name, ring).map_err(|e| CliError::Input(format!("--order: {e}"))),
        None => Ok(fallback.unwrap_or(TermOrder::DegRevLex)),
    }
}

fn poly_arg(ring: &Arc<RingSpec>, text: &str, flag: &str) -> Result<Polynomial, CliError> {
    parse_polynomial(ring, text).map_err(|e| CliError::Input(format!("{flag}: {e}")))
}

fn polys_text<C: Field>(order: &TermOrder, polys: &[Polynomial<C>]) -> Vec<String> {
    polys.iter().map(|p| print_polynomial(order, p)).collect()
}

fn lines(items: &[String]) -> String {
    items.iter().map(|s| format!("{s}\n")).collect()
}

/// A basis printed with its ring and order, readable as an ideal file.
fn basis_output<C: Field>(basis: &GroebnerBasis<C>) -> Output {
    let (ring, order) = (basis.ring(), basis.order());
    let polys = polys_text(order, basis.elements());
    let text = format!(
        "QQ[{}]\norder: {}\n{}",
        ring.names().join(","),
        order.name(ring),
        lines(&polys)
    );
    Output::new(
        text,
        json!({"ring": ring.names(), "order": order.name(ring), "generators": polys}),
    )
}

fn ideal_of(file: &IdealFile) -> Result<Ideal, CliError> {
    Ok(Ideal::new(&file.ring, file.generators.clone())?)
}

fn load_ideal(global: &Global, path: &Path) -> Result<(IdealFile, Ideal, TermOrder), CliError> {
    let file = read_ideal(&read(path)?)?;
    let order = order_for(global, &file.ring, file.order.clone())?;
    let ideal = ideal_of(&file)?;
    Ok((file, ideal, order))
}

fn load_family(global: &Global, path: &Path) -> Result<(Family, TermOrder), CliError> {
    let FamilyFile { family, order } = read_family(&read(path)?)?;
    let order = order_for(global, family.vars(), order)?;
    Ok((family, order))
}

fn slice_family(file: &SliceFile) -> Result<SliceFamily, CliError> {
    Ok(SliceFamily::new(
        &file.ring,
        file.pivot,
        file.tail.clone(),
        file.gammas.clone(),
    )?)
}

fn point_value(p: &[slicegb::Rational]) -> Value {
    json!(format_point(p))
}

pub fn dispatch(global: &Global, command: &Command) -> Result<Output, CliError> {
    match command {
        Command::Gb { file } => {
            let (_, ideal, order) = load_ideal(global, file)?;
            Ok(basis_output(&reduced_groebner(&order, &ideal)?))
        }
        Command::Nf { file, poly } => {
            let (f, ideal, order) = load_ideal(global, file)?;
            let p = poly_arg(&f.ring, poly, "--poly")?;
            let nf = reduced_groebner(&order, &ideal)?.normal_form(&p);
            let s = print_polynomial(&order, &nf);
            Ok(Output::new(
                format!("{s}\n"),
                json!({"normal_form": s, "member": nf.is_zero()}),
            ))
        }
        Command::Eliminate { file, vars } => {
            let (f, ideal, _) = load_ideal(global, file)?;
            let mut drop = Vec::new();
            for name in vars.split(',').map(str::trim).filter(|v| !v.is_empty()) {
                drop.push(
                    f.ring
                        .index_of(name)
                        .ok_or_else(|| CliError::Input(format!("--vars: unknown variable `{name}`")))?,
                );
            }
            let elim = eliminate(&ideal, &drop)?;
            Ok(basis_output(&GroebnerBasis::from_basis(
                elim.ring(),
                &TermOrder::DegRevLex,
                elim.generators().to_vec(),
            )))
        }
        Command::Dim { file } => {
            let (_, ideal, order) = load_ideal(global, file)?;
            let d = dimension(&ideal, &order)?;
            Ok(Output::new(format!("{d}\n"), json!({"dimension": d})))
        }
        Command::Colon { file, poly } => {
            let (f, ideal, order) = load_ideal(global, file)?;
            let p = poly_arg(&f.ring, poly, "--poly")?;
            let colon = colon_ideal(&ideal, &p)?;
            Ok(basis_output(&reduced_groebner(&order, &colon)?))
        }
        Command::Section {
            file,
            form,
            homogeneous,
        } => {
            let (f, ideal, order) = load_ideal(global, file)?;
            if *homogeneous {
                let form = parse_hom_linear_form(&f.ring, form)?;
                return Ok(basis_output(&homogeneous_section_gb(&ideal, &form, &order)?));
            }
            let form = parse_linear_form(&f.ring, form)?;
            let gb = reduced_groebner(&order, &ideal)?;
            let report = section_gb(&gb, &form)?;
            Ok(basis_output(&report.basis.expect("section_gb returns a basis")))
        }
        Command::Lift { file, form, basis } => {
            let (f, ideal, order) = load_ideal(global, file)?;
            let candidate = read_ideal(&read(basis)?)?;
            if candidate.ring != f.ring {
                return Err(CliError::Input("--basis: ring differs from the ideal's ring".into()));
            }
            let form = parse_linear_form(&f.ring, form)?;
            Ok(basis_output(&verify_lifting(
                &ideal,
                &candidate.generators,
                &form,
                &order,
            )?))
        }
        Command::CommonLift { file } => {
            let s = read_slices(&read(file)?)?;
            let family = slice_family(&s)?;
            let width = s.slices[0].len();
            if s.slices.iter().any(|g| g.len() != width) {
                return Err(CliError::Input(
                    "every slice needs the same number of generators".into(),
                ));
            }
            let order = order_for(global, &s.ring, s.order.clone())?;
            let mut out = Vec::new();
            for j in 0..width {
                let values: Vec<Polynomial> = s.slices.iter().map(|g| g[j].clone()).collect();
                out.push(common_lifting(&family, &values)?);
            }
            let polys = polys_text(&order, &out);
            Ok(Output::new(
                lines(&polys),
                json!({"ring": s.ring.names(), "liftings": polys}),
            ))
        }
        Command::Reconstruct { file, check } => {
            let s = read_slices(&read(file)?)?;
            let family = slice_family(&s)?;
            let order = order_for(global, &s.ring, s.order.clone())?;
            order
                .validate(s.ring.arity())
                .map_err(|e| CliError::Input(e.to_string()))?;
            let hat = order.restrict(s.pivot, s.ring.arity());
            let hat_ring = family.section_ring();
            let bases = s
                .slices
                .iter()
                .map(|g| reduced_groebner(&hat, &Ideal::new(&hat_ring, g.clone())?))
                .collect::<Result<Vec<_>, _>>()?;
            let oracle = match check {
                Some(path) => {
                    let (_, ideal, _) = load_ideal(global, path)?;
                    if ideal.ring() != &s.ring {
                        return Err(CliError::Input("--check: ring differs from the slice ring".into()));
                    }
                    MembershipOracle::GbCheck(reduced_groebner(&TermOrder::DegRevLex, &ideal)?)
                }
                None => MembershipOracle::Trust,
            };
            let rec = reconstruct_gb(&family, &bases, &order, &oracle)?;
            if !rec.certified {
                eprintln!("note: membership not checked (pass --check to certify)");
            }
            let mut out = basis_output(&rec.basis);
            out.json["certified"] = json!(rec.certified);
            Ok(out)
        }
        Command::Implicitize {
            file,
            mode,
            pivot,
            slices,
        } => {
            let p = read_parametrization(&read(file)?)?;
            let mode = match mode {
                Mode::Eliminate => ImplicitMode::Eliminate,
                Mode::Slice => {
                    let pivot = match pivot {
                        Some(name) => p
                            .target
                            .index_of(name)
                            .ok_or_else(|| CliError::Input(format!("--pivot: unknown variable `{name}`")))?,
                        None => 0,
                    };
                    let mut opts = SliceOptions::new(pivot);
                    opts.slices = *slices;
                    opts.seed = seed_from_env();
                    ImplicitMode::Slice(opts)
                }
            };
            let f = implicitize(&p.coordinates, &p.target, &mode)?;
            let order = order_for(global, &p.target, None)?;
            let s = print_polynomial(&order, &f);
            Ok(Output::new(
                format!("{s}\n"),
                json!({"ring": p.target.names(), "polynomial": s, "degree": f.total_degree(), "terms": f.num_terms()}),
            ))
        }
        Command::FamilyGb { file } => {
            let (family, order) = load_family(global, file)?;
            let gb = param_gb(&family, &order)?;
            let polys = polys_text(&order, gb.elements());
            let text = format!(
                "QQ({})[{}]\norder: {}\n{}",
                family.params().names().join(","),
                family.vars().names().join(","),
                order.name(family.vars()),
                lines(&polys)
            );
            Ok(Output::new(
                text,
                json!({"params": family.params().names(), "vars": family.vars().names(), "order": order.name(family.vars()), "basis": polys}),
            ))
        }
        Command::Ncc { file } => {
            let (family, order) = load_family(global, file)?;
            let gb = param_gb(&family, &order)?;
            let ncc: Vec<String> = ncc_list(&gb).iter().map(|c| c.text()).collect();
            let d = print_polynomial(&TermOrder::DegRevLex, &sigma_denominator(&gb));
            Ok(Output::new(
                format!("{}denominator: {d}\n", lines(&ncc)),
                json!({"ncc": ncc, "denominator": d}),
            ))
        }
        Command::SigmaScheme { file, implicit } => {
            let (family, order) = load_family(global, file)?;
            let scheme = sigma_scheme(&param_gb(&family, &order)?, *implicit)?;
            let coords: Vec<String> = scheme.coordinates.iter().map(|c| c.text()).collect();
            let names: Vec<String> = match &scheme.ring {
                Some(r) => r.names().to_vec(),
                None => Vec::new(),
            };
            let mut text: String = names.iter().zip(&coords).map(|(y, c)| format!("{y} = {c}\n")).collect();
            let mut value = json!({"ring": names, "coordinates": coords});
            if let Some(ideal) = &scheme.implicit {
                let gens = polys_text(&TermOrder::DegRevLex, ideal.generators());
                text.push_str("implicit:\n");
                text.push_str(&lines(&gens));
                value["implicit"] = json!(gens);
            }
            if let Some(d) = scheme.dimension {
                text.push_str(&format!("dimension: {d}\n"));
                value["dimension"] = json!(d);
            }
            Ok(Output::new(text, value))
        }
        Command::Independent { file } => {
            let (family, _) = load_family(global, file)?;
            let ind = params_independent(&family)?;
            let witness = ind.witness.as_ref().map(|w| print_polynomial(&TermOrder::DegRevLex, w));
            let text = match &witness {
                None => "independent\n".to_string(),
                Some(w) => format!("dependent\nwitness: {w}\n"),
            };
            Ok(Output::new(
                text,
                json!({"independent": ind.independent, "witness": witness, "cross_checked": ind.cross_checked}),
            ))
        }
        Command::FamilySection { file, form } => {
            let (family, order) = load_family(global, file)?;
            let form = parse_linear_form(family.vars(), form)?;
            let section = family_section(&family, &form, &order)?;
            let Some(basis) = &section.report.basis else {
                let bad: Vec<String> = section.report.offending().iter().map(|j| (j + 1).to_string()).collect();
                return Err(CliError::Hypothesis(format!(
                    "leading terms change for basis elements {}",
                    bad.join(", ")
                )));
            };
            if !section.independence.independent {
                return Err(CliError::Hypothesis(
                    "the sectioned family has dependent parameters".into(),
                ));
            }
            let polys = polys_text(basis.order(), basis.elements());
            let text = format!(
                "QQ({})[{}]\norder: {}\n{}",
                family.params().names().join(","),
                basis.ring().names().join(","),
                basis.order().name(basis.ring()),
                lines(&polys)
            );
            Ok(Output::new(
                text,
                json!({"params": family.params().names(), "vars": basis.ring().names(), "order": basis.order().name(basis.ring()), "basis": polys}),
            ))
        }
        Command::Hough { file, point, generic } => {
            let (family, _) = load_family(global, file)?;
            if *generic {
                let d = generic_hough_dimension(&family)?;
                return Ok(Output::new(
                    format!(
                        "family dimension: {}\nimage dimension: {}\ngeneric transform dimension: {}\nzero-dimensional: {}\n",
                        d.family, d.image, d.generic, d.zero_dimensional
                    ),
                    json!({"family": d.family, "image": d.image, "generic": d.generic, "zero_dimensional": d.zero_dimensional}),
                ));
            }
            let p = parse_point(point.as_deref().expect("clap requires --point"))?;
            let h = hough_ideal(&family, &p)?;
            let polys = polys_text(h.ideal.order(), h.ideal.elements());
            let mut text = format!(
                "QQ[{}]\n{}dimension: {}\n",
                family.params().names().join(","),
                lines(&polys),
                h.dimension
            );
            if let Some(sol) = &h.solution {
                text.push_str(&format!("solution: {}\n", format_point(sol).join(",")));
            }
            Ok(Output::new(
                text,
                json!({"params": family.params().names(), "ideal": polys, "dimension": h.dimension, "empty": h.empty, "solution": h.solution.as_deref().map(point_value)}),
            ))
        }
        Command::Detect { file, points } => {
            let (family, _) = load_family(global, file)?;
            let points = points.iter().map(|p| parse_point(p)).collect::<Result<Vec<_>, _>>()?;
            match detect(&family, &points)? {
                DetectionResult::Point(alpha) => Ok(Output::new(
                    format!("{}\n", format_point(&alpha).join(",")),
                    json!({"result": "point", "point": point_value(&alpha)}),
                )),
                DetectionResult::Ideal { basis, dimension } => {
                    let polys = polys_text(basis.order(), basis.elements());
                    Ok(Output::new(
                        format!(
                            "QQ[{}]\n{}dimension: {dimension}\n",
                            family.params().names().join(","),
                            lines(&polys)
                        ),
                        json!({"result": "ideal", "ideal": polys, "dimension": dimension}),
                    ))
                }
                DetectionResult::Inconsistent => Err(CliError::Hypothesis(
                    "no member of the family passes through all points".into(),
                )),
            }
        }
        Command::ReconstructSurface { file, check } => {
            let d = read_detect(&read(file)?)?;
            let order = order_for(global, &d.target, d.order.clone())?;
            let oracle = match check {
                Some(path) => {
                    let (_, ideal, _) = load_ideal(global, path)?;
                    if ideal.ring() != &d.target {
                        return Err(CliError::Input("--check: ring differs from the target ring".into()));
                    }
                    MembershipOracle::GbCheck(reduced_groebner(&TermOrder::DegRevLex, &ideal)?)
                }
                None => MembershipOracle::Trust,
            };
            let f = reconstruct_surface(&d.template, &d.slices, &d.target, d.pivot, &order, &oracle)?;
            let s = print_polynomial(&order, &f);
            Ok(Output::new(
                format!("{s}\n"),
                json!({"ring": d.target.names(), "polynomial": s}),
            ))
        }
    }
}
