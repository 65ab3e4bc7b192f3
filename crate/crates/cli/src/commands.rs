use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use charcalc::asymptotics::{
    certified_k, certify_with_tolerance, dominance_report, evaluate_side, CharacterTable,
    DominanceRow, GeometricSide, GeometricSideJson, HYPOTHESIS_TOL,
};
use charcalc::characters::{
    char_oracle, char_regular, char_singular, decay_ratio, min_grid, orthogonality_integral,
    weight_multiplicities, weyl_dim,
};
use charcalc::epinvariants::{ep_report, torus_cohomology_check, AutomorphismData, IntMatrix};
use charcalc::rational::{fmt_big, fmt_q, parse_q_list, serde_complex};
use charcalc::rootdata::build_root_datum;
use charcalc::twistednorm::{
    from_whittaker, is_elliptic, norm_class, parameter_maps, twisted_character, twisted_denominator,
    CMatrix, DiscreteParameter, TwistedSource, TWISTED_SIGN,
};
use charcalc::{Error, RootDatum, TorusElement, Weight};

use crate::{AutomorphismArgs, CliError, Command, DatumArgs, Format, IoArgs, Method, TwistedArgs};

type Res<T> = std::result::Result<T, CliError>;

fn json<T: Serialize>(value: &T) -> Res<String> {
    let mut s = serde_json::to_string(value).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn datum(args: &DatumArgs) -> Res<RootDatum> {
    Ok(build_root_datum(args.family, args.rank, args.lattice)?)
}

fn weight(s: &str) -> Res<Weight> {
    Ok(Weight(parse_q_list(s)?))
}

fn torus(s: &str) -> Res<TorusElement> {
    Ok(TorusElement::new(parse_q_list(s)?))
}

fn complex_list(s: &str) -> Res<Vec<Complex64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<Complex64>()
                .map_err(|_| CliError::Core(Error::Parse(format!("not a complex number: {t:?}"))))
        })
        .collect()
}

fn matrix_rows(s: &str) -> Res<Vec<Vec<Complex64>>> {
    let rows: Vec<Vec<Complex64>> = s.split(';').map(complex_list).collect::<Res<_>>()?;
    let cols = rows.first().map_or(0, Vec::len);
    if cols == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse("matrix rows must be nonempty and of equal length".into()).into());
    }
    Ok(rows)
}

fn complex_matrix(s: &str) -> Res<CMatrix> {
    let rows = matrix_rows(s)?;
    Ok(CMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]))
}

fn int_matrix(s: &str) -> Res<IntMatrix> {
    s.split(';')
        .map(|row| {
            row.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<i64>()
                        .map_err(|_| CliError::Core(Error::Parse(format!("not an integer: {t:?}"))))
                })
                .collect()
        })
        .collect()
}

fn read_side(path: &std::path::Path) -> Res<GeometricSide> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let parsed: GeometricSideJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Core(Error::Parse(format!("side file: {e}"))))?;
    Ok(GeometricSide::from_json(&parsed)?)
}

#[derive(Serialize)]
struct Value {
    #[serde(with = "serde_complex")]
    value: Complex64,
}

fn twisted_class(args: &TwistedArgs) -> Res<charcalc::twistednorm::TwistedClass> {
    let source = match (&args.matrix, &args.angles) {
        (Some(m), _) => {
            let mut g = complex_matrix(m)?;
            if args.whittaker {
                g = from_whittaker(args.n, &g)?;
            }
            TwistedSource::Matrix(g)
        }
        (None, Some(a)) => TwistedSource::Angles(parse_q_list(a)?),
        (None, None) => {
            return Err(Error::InvalidParameter("one of --matrix or --angles is required".into()).into())
        }
    };
    Ok(norm_class(args.n, source)?)
}

fn automorphism(args: &AutomorphismArgs) -> Res<AutomorphismData> {
    if let Some(preset) = &args.preset {
        return match preset.as_str() {
            "gl2n" => {
                let n = args
                    .n
                    .ok_or_else(|| CliError::Core(Error::InvalidParameter("--n is required for gl2n".into())))?;
                Ok(AutomorphismData::gl2n(n)?)
            }
            other => Err(Error::InvalidParameter(format!("unknown preset {other:?}")).into()),
        };
    }
    let theta_s = match &args.theta_s {
        Some(s) if !s.trim().is_empty() => int_matrix(s)?,
        _ => Vec::new(),
    };
    let theta_sp = match &args.theta_sprime {
        Some(s) if !s.trim().is_empty() => int_matrix(s)?,
        _ => Vec::new(),
    };
    let q = args.q.unwrap_or(theta_sp.len());
    Ok(AutomorphismData::new(theta_s, q, theta_sp)?)
}

#[derive(Serialize)]
struct MultRow {
    weight: String,
    multiplicity: u64,
}

#[derive(Serialize)]
struct DominanceCsvRow {
    k: u64,
    ratio_re: f64,
    ratio_im: f64,
    principal_re: f64,
    principal_im: f64,
    deviation: f64,
    bound: f64,
}

fn csv_of<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Res<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

fn weight_label(w: &Weight) -> String {
    w.0.iter().map(fmt_q).collect::<Vec<_>>().join(" ")
}

pub fn run(command: &Command, io: &IoArgs) -> Res<String> {
    let json_only = |name: &str| -> Res<()> {
        if io.format == Format::Csv {
            return Err(Error::InvalidParameter(format!("{name} has no CSV output")).into());
        }
        Ok(())
    };
    match command {
        Command::Dim { datum: d, weight: w } => {
            json_only("dim")?;
            let dim = weyl_dim(&datum(d)?, &weight(w)?)?;
            json(&BTreeMap::from([("dim", fmt_big(&dim))]))
        }
        Command::Mults { datum: d, weight: w } => {
            let mults = weight_multiplicities(&datum(d)?, &weight(w)?)?;
            let rows = mults.iter().map(|(w, m)| MultRow {
                weight: weight_label(w),
                multiplicity: *m,
            });
            if io.format == Format::Csv {
                return csv_of(rows);
            }
            #[derive(Serialize)]
            struct Entry<'a> {
                weight: &'a Weight,
                multiplicity: u64,
            }
            let entries: Vec<Entry> = mults
                .iter()
                .map(|(w, m)| Entry {
                    weight: w,
                    multiplicity: *m,
                })
                .collect();
            json(&BTreeMap::from([("multiplicities", entries)]))
        }
        Command::Char {
            datum: d,
            weight: w,
            angles,
            method,
        } => {
            json_only("char")?;
            let (d, w, g) = (datum(d)?, weight(w)?, torus(angles)?);
            let value = match method {
                Method::Singular => char_singular(&d, &w, &g)?.value,
                Method::Regular => char_regular(&d, &w, &g)?,
                Method::Oracle => char_oracle(&d, &w, &g)?,
            };
            json(&Value { value })
        }
        Command::CharReport { datum: d, weight: w, angles } => {
            json_only("char-report")?;
            json(&char_singular(&datum(d)?, &weight(w)?, &torus(angles)?)?)
        }
        Command::Decay { datum: d, weight: w, angles } => {
            json_only("decay")?;
            let r = decay_ratio(&datum(d)?, &weight(w)?, &torus(angles)?)?;
            json(&BTreeMap::from([("decay_ratio", fmt_big(&r))]))
        }
        Command::Ortho {
            datum: d,
            weight: w1,
            weight2: w2,
            grid,
        } => {
            json_only("ortho")?;
            let (d, w1, w2) = (datum(d)?, weight(w1)?, weight(w2)?);
            let grid = grid.unwrap_or_else(|| min_grid(&d, &[&w1, &w2]));
            #[derive(Serialize)]
            struct Out {
                #[serde(with = "serde_complex")]
                value: Complex64,
                grid: usize,
            }
            json(&Out {
                value: orthogonality_integral(&d, &w1, &w2, grid)?,
                grid,
            })
        }
        Command::Norm(args) => {
            json_only("norm")?;
            json(&twisted_class(args)?)
        }
        Command::Elliptic(args) => {
            json_only("elliptic")?;
            json(&BTreeMap::from([("elliptic", is_elliptic(&twisted_class(args)?))]))
        }
        Command::TwistedDenom { x } => {
            json_only("twisted-denom")?;
            json(&Value {
                value: twisted_denominator(&complex_list(x)?)?,
            })
        }
        Command::TwistedChar { n, p, angles } => {
            json_only("twisted-char")?;
            let p = DiscreteParameter::new(parse_q_list(p)?)?;
            #[derive(Serialize)]
            struct Out {
                #[serde(with = "serde_complex")]
                value: Complex64,
                sign: i8,
            }
            json(&Out {
                value: twisted_character(*n, &p, &parse_q_list(angles)?)?,
                sign: TWISTED_SIGN,
            })
        }
        Command::Params { n, p, weight: w } => {
            json_only("params")?;
            let param = match (p, w) {
                (Some(p), None) => DiscreteParameter::new(parse_q_list(p)?)?,
                (None, Some(w)) => DiscreteParameter::from_highest_weight(&weight(w)?)?,
                _ => {
                    return Err(Error::InvalidParameter("exactly one of --p or --weight is required".into()).into())
                }
            };
            #[derive(Serialize)]
            struct Out<'a> {
                p: &'a DiscreteParameter,
                #[serde(flatten)]
                maps: charcalc::twistednorm::ParameterMaps,
            }
            json(&Out {
                maps: parameter_maps(*n, &param)?,
                p: &param,
            })
        }
        Command::Ep(args) => {
            json_only("ep")?;
            json(&ep_report(&automorphism(args)?)?)
        }
        Command::CohomologyCheck(args) => {
            json_only("cohomology-check")?;
            json(&torus_cohomology_check(&automorphism(args)?)?)
        }
        Command::SideEval { side, weight: w } => {
            json_only("side-eval")?;
            json(&Value {
                value: evaluate_side(&read_side(side)?, &weight(w)?)?,
            })
        }
        Command::Dominance { side, direction, kmax } => {
            let side = read_side(side)?;
            let dir = weight(direction)?;
            let rows = dominance_report(&side, &dir, *kmax)?;
            if io.format == Format::Csv {
                return csv_of(rows.iter().map(|r: &DominanceRow| DominanceCsvRow {
                    k: r.k,
                    ratio_re: r.ratio.re,
                    ratio_im: r.ratio.im,
                    principal_re: r.principal.re,
                    principal_im: r.principal.im,
                    deviation: r.deviation,
                    bound: r.bound,
                }));
            }
            let eps = io.tolerance.unwrap_or(0.01 * side.principal().coeff.norm());
            #[derive(Serialize)]
            struct Out {
                rows: Vec<DominanceRow>,
                epsilon: f64,
                certified_k: u64,
            }
            json(&Out {
                certified_k: certified_k(&side, &dir, eps)?,
                epsilon: eps,
                rows,
            })
        }
        Command::Positivity { side, height_cap } => {
            json_only("positivity")?;
            let side = read_side(side)?;
            let p = side.principal_index();
            let mut order: Vec<usize> = vec![p];
            order.extend((0..side.classes().len()).filter(|&i| i != p));
            let classes: Vec<TorusElement> = order.iter().map(|&i| side.classes()[i].gamma.clone()).collect();
            let coeffs: Vec<Complex64> = order.iter().map(|&i| side.classes()[i].coeff).collect();
            let table = CharacterTable::new(side.datum(), &classes, *height_cap)?;
            let tol = io.tolerance.unwrap_or(HYPOTHESIS_TOL);
            json(&certify_with_tolerance(&table, &coeffs, tol)?)
        }
    }
}
