//! Named metrics, perturbations, symbols and test functions.

use std::sync::Arc;

use super::expr::Expr;
use crate::error::{Error, Result};
use crate::hilb::MetricField;
use crate::manifolds::{ManifoldKind, ManifoldModel, ManifoldPoint};
use crate::metspace::MetricPerturbation;
use crate::operators::{FnSymbol, MultiplicationSymbol, ScalarField, Symbol};
use crate::tensor::PointTensor;

struct Preset {
    name: &'static str,
    models: &'static str,
    formula: &'static str,
}

const METRICS: &[Preset] = &[
    Preset { name: "reference", models: "all", formula: "g = g₀" },
    Preset { name: "conformal:u=<expr>", models: "all", formula: "g = e^u g₀, u an expression" },
    Preset { name: "aniso-diag:e1,e2", models: "torus2", formula: "g = diag(e^{e1 cos x1}, e^{e2 cos x2})" },
];

const PERTURBATIONS: &[Preset] = &[
    Preset { name: "zero", models: "all", formula: "ġ = 0" },
    Preset { name: "cos-theta", models: "circle", formula: "ġ = cos θ dθ²" },
    Preset { name: "cos-x1-dx1dx1", models: "torus2", formula: "ġ = cos x1 dx1⊗dx1" },
    Preset { name: "conformal:phi=<expr>", models: "all", formula: "ġ = φ g₀" },
];

const SYMBOLS: &[Preset] = &[
    Preset { name: "xi1-sq", models: "torus2", formula: "b = ξ₁²/|ξ|²" },
    Preset { name: "<function>", models: "all", formula: "b(x, ξ) = a(x) for any test function below" },
];

const FUNCTIONS: &[Preset] = &[
    Preset { name: "one", models: "all", formula: "a = 1" },
    Preset { name: "e-cos-theta", models: "circle", formula: "a = e^{cos θ}" },
    Preset { name: "cos-x1", models: "torus2", formula: "a = cos x1" },
    Preset { name: "e-0.3cos-x1", models: "torus2", formula: "a = e^{0.3 cos x1}" },
    Preset { name: "x3", models: "sphere2", formula: "a = x₃ (ambient height)" },
    Preset { name: "one-plus-half-x3sq", models: "sphere2", formula: "a = 1 + x₃²/2" },
    Preset { name: "expr:<expr>", models: "all", formula: "a given by an expression" },
];

/// Help text for every preset family.
pub fn list_presets() -> String {
    let mut out = String::new();
    for (title, list) in [
        ("metrics (--metric)", METRICS),
        ("perturbations (--gdot)", PERTURBATIONS),
        ("symbols (--symbol, '*'-separated products for szego)", SYMBOLS),
        ("test functions (--function)", FUNCTIONS),
    ] {
        out.push_str(title);
        out.push('\n');
        for p in list {
            out.push_str(&format!("  {:<24} [{}] {}\n", p.name, p.models, p.formula));
        }
    }
    out.push_str(
        "expressions: variables theta (circle); x1, x2 (torus2); theta, phi, x, y, z (sphere2);\n  \
         functions sin cos tan exp log sqrt abs; constants pi, e; juxtaposition multiplies, e.g. 0.3cos(x1)\n",
    );
    out
}

fn need(model: ManifoldModel, kind: ManifoldKind, name: &str) -> Result<()> {
    if model.kind() != kind {
        return Err(Error::Input(format!("preset '{name}' is defined on {kind}, not {}", model.kind())));
    }
    Ok(())
}

fn expr_field(label: &str, src: &str, model: ManifoldModel) -> Result<ScalarField> {
    let e = Expr::parse(src, model.kind())?;
    Ok(ScalarField::new(label.to_string(), move |p: &ManifoldPoint| e.eval(p)))
}

fn coord(i: usize) -> impl Fn(&ManifoldPoint) -> f64 + Send + Sync + Copy {
    move |p: &ManifoldPoint| p.coords()[i]
}

fn height(p: &ManifoldPoint) -> f64 {
    p.ambient().map_or(0.0, |x| x[2])
}

pub fn parse_function(spec: &str, model: ManifoldModel) -> Result<ScalarField> {
    let spec = spec.trim();
    if let Some(src) = spec.strip_prefix("expr:") {
        return expr_field(spec, src, model);
    }
    let c0 = coord(0);
    Ok(match spec {
        "one" => ScalarField::band_limited("one", 0, |_| 1.0),
        "e-cos-theta" => {
            need(model, ManifoldKind::Circle, spec)?;
            ScalarField::new(spec, move |p: &ManifoldPoint| c0(p).cos().exp())
        }
        "cos-x1" => {
            need(model, ManifoldKind::Torus2, spec)?;
            ScalarField::band_limited(spec, 1, move |p: &ManifoldPoint| c0(p).cos())
        }
        "e-0.3cos-x1" => {
            need(model, ManifoldKind::Torus2, spec)?;
            ScalarField::new(spec, move |p: &ManifoldPoint| (0.3 * c0(p).cos()).exp())
        }
        "x3" => {
            need(model, ManifoldKind::Sphere2, spec)?;
            ScalarField::band_limited(spec, 1, height)
        }
        "one-plus-half-x3sq" => {
            need(model, ManifoldKind::Sphere2, spec)?;
            ScalarField::band_limited(spec, 2, |p: &ManifoldPoint| 1.0 + 0.5 * height(p).powi(2))
        }
        _ => return Err(Error::Input(format!("unknown test function '{spec}' (see list-presets)"))),
    })
}

pub fn parse_symbol(spec: &str, model: ManifoldModel) -> Result<Arc<dyn Symbol>> {
    match spec.trim() {
        "xi1-sq" => {
            need(model, ManifoldKind::Torus2, "xi1-sq")?;
            Ok(Arc::new(FnSymbol::multiplier(|xi| xi[0] * xi[0])))
        }
        other => Ok(Arc::new(MultiplicationSymbol(parse_function(other, model).map_err(|_| {
            Error::Input(format!("unknown symbol '{other}' (see list-presets)"))
        })?))),
    }
}

fn parse_coefficients(s: &str, name: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| Error::Input(format!("bad coefficient '{v}' in '{name}'"))))
        .collect()
}

pub fn parse_metric(spec: &str, model: ManifoldModel) -> Result<MetricField> {
    let spec = spec.trim();
    if spec == "reference" {
        return Ok(MetricField::reference());
    }
    if let Some(src) = spec.strip_prefix("conformal:u=") {
        return Ok(MetricField::conformal(expr_field(src, src, model)?));
    }
    if let Some(rest) = spec.strip_prefix("aniso-diag:") {
        need(model, ManifoldKind::Torus2, "aniso-diag")?;
        let c = parse_coefficients(rest, spec)?;
        let [e1, e2] = c[..] else {
            return Err(Error::Input(format!("'{spec}' needs two coefficients")));
        };
        let (c0, c1) = (coord(0), coord(1));
        return Ok(MetricField::diagonal_exponential(
            spec,
            ScalarField::new(format!("{e1} cos x1"), move |p: &ManifoldPoint| e1 * c0(p).cos()),
            ScalarField::new(format!("{e2} cos x2"), move |p: &ManifoldPoint| e2 * c1(p).cos()),
        ));
    }
    Err(Error::Input(format!("unknown metric '{spec}' (see list-presets)")))
}

pub fn parse_perturbation(spec: &str, model: ManifoldModel) -> Result<MetricPerturbation> {
    let spec = spec.trim();
    if let Some(src) = spec.strip_prefix("conformal:phi=") {
        let e = Expr::parse(src, model.kind())?;
        return Ok(MetricPerturbation::conformal(spec, move |p: &ManifoldPoint| e.eval(p)));
    }
    let c0 = coord(0);
    Ok(match spec {
        "zero" => MetricPerturbation::zero(),
        "cos-theta" => {
            need(model, ManifoldKind::Circle, spec)?;
            MetricPerturbation::new(spec, move |p: &ManifoldPoint| PointTensor::scalar(c0(p).cos()))
        }
        "cos-x1-dx1dx1" => {
            need(model, ManifoldKind::Torus2, spec)?;
            MetricPerturbation::new(spec, move |p: &ManifoldPoint| PointTensor::diagonal(2, [c0(p).cos(), 0.0]))
        }
        _ => return Err(Error::Input(format!("unknown perturbation '{spec}' (see list-presets)"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_mentions_required_names() {
        let s = list_presets();
        for name in ["conformal:u=", "aniso-diag:e1,e2", "one-plus-half-x3sq"] {
            assert!(s.contains(name), "{name}");
        }
    }

    #[test]
    fn conformal_metric_from_expression() {
        let g = parse_metric("conformal:u=0.3cos(x1)", ManifoldModel::TORUS2).unwrap();
        let p = ManifoldPoint::torus(0.0, 1.0);
        assert!((g.eval(&p).unwrap().get(1, 1) - 0.3f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn model_mismatch_and_unknown() {
        assert!(parse_metric("aniso-diag:0.3,0.3", ManifoldModel::CIRCLE).is_err());
        assert!(parse_metric("aniso-diag:0.3", ManifoldModel::TORUS2).is_err());
        assert!(parse_function("nope", ManifoldModel::CIRCLE).is_err());
        assert!(parse_symbol("xi1-sq", ManifoldModel::SPHERE2).is_err());
        assert!(parse_perturbation("cos-theta", ManifoldModel::TORUS2).is_err());
    }
}
