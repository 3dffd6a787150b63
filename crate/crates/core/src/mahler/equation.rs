use serde::{Deserialize, Serialize};

use crate::algebra::rat::{parse_rat, rat_to_string};
use crate::algebra::{parse_ratfun, Poly, Rat};

use super::MahlerError;

/// `a_0(z) f(z) + a_1(z) f(z^q) + ... + a_m(z) f(z^{q^m}) = b(z)` together
/// with prescribed leading coefficients of the solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MahlerEquation {
    q: u64,
    a: Vec<Poly>,
    rhs: Poly,
    seeds: Vec<Rat>,
    name: String,
}

impl MahlerEquation {
    pub fn new(q: u64, a: Vec<Poly>, rhs: Poly, seeds: Vec<Rat>) -> Result<Self, MahlerError> {
        if q < 2 {
            return Err(MahlerError::InvalidBase(q));
        }
        let Some(last) = a.last() else {
            return Err(MahlerError::EmptyEquation);
        };
        if a[0].is_zero() || last.is_zero() {
            return Err(MahlerError::VanishingEndCoefficient);
        }
        if a.len() == 1 && rhs.is_zero() {
            return Err(MahlerError::EmptyEquation);
        }
        Ok(MahlerEquation {
            q,
            a,
            rhs,
            seeds,
            name: String::new(),
        })
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Order `m` (number of coefficients minus one).
    pub fn order(&self) -> usize {
        self.a.len() - 1
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.a
    }

    pub fn rhs(&self) -> &Poly {
        &self.rhs
    }

    pub fn is_homogeneous(&self) -> bool {
        self.rhs.is_zero()
    }

    pub fn seeds(&self) -> &[Rat] {
        &self.seeds
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_seeds(&self, seeds: Vec<Rat>) -> Self {
        MahlerEquation {
            seeds,
            ..self.clone()
        }
    }

    /// Reads an equation document; rational-function coefficients are
    /// multiplied through by the lcm of their denominators.
    pub fn from_doc(doc: &EquationDoc) -> Result<Self, MahlerError> {
        let parse = |field: String, text: &str| {
            parse_ratfun(text).map_err(|source| MahlerError::Parse { field, source })
        };
        let mut fns = Vec::with_capacity(doc.coeffs.len() + 1);
        for (i, c) in doc.coeffs.iter().enumerate() {
            fns.push(parse(format!("coeffs[{i}]"), c)?);
        }
        fns.push(parse("rhs".into(), &doc.rhs)?);
        let l = fns.iter().fold(Poly::one(), |acc, f| acc.lcm(f.den()));
        let low = l.coeff(l.valuation().expect("nonzero"));
        let l = l.scale(&low.recip());
        let mut polys: Vec<Poly> = fns
            .iter()
            .map(|f| (f.num() * &l).exact_div(f.den()).expect("lcm divisible"))
            .collect();
        let rhs = polys.pop().expect("rhs present");
        let seeds = doc
            .seeds
            .iter()
            .enumerate()
            .map(|(i, s)| {
                parse_rat(s).ok_or_else(|| MahlerError::BadSeed {
                    index: i,
                    text: s.clone(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MahlerEquation::new(doc.q, polys, rhs, seeds)?.named(doc.name.clone()))
    }

    pub fn from_json(text: &str) -> Result<Self, MahlerError> {
        let doc: EquationDoc =
            serde_json::from_str(text).map_err(|e| MahlerError::Json(e.to_string()))?;
        Self::from_doc(&doc)
    }

    pub fn to_doc(&self) -> EquationDoc {
        EquationDoc {
            q: self.q,
            coeffs: self.a.iter().map(|p| p.to_string()).collect(),
            rhs: self.rhs.to_string(),
            seeds: self.seeds.iter().map(rat_to_string).collect(),
            name: self.name.clone(),
        }
    }
}

fn zero_string() -> String {
    "0".to_string()
}

/// JSON exchange format for equations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationDoc {
    pub q: u64,
    pub coeffs: Vec<String>,
    #[serde(default = "zero_string")]
    pub rhs: String,
    #[serde(default)]
    pub seeds: Vec<String>,
    #[serde(default)]
    pub name: String,
}

/// Bundled example equations.
pub mod corpus {
    use super::MahlerEquation;

    const DOCS: &[(&str, &str)] = &[
        ("powers2", include_str!("../../corpus/powers2.json")),
        ("powers3", include_str!("../../corpus/powers3.json")),
        ("thue_morse", include_str!("../../corpus/thue_morse.json")),
        ("cantor", include_str!("../../corpus/cantor.json")),
        ("floor_log2", include_str!("../../corpus/floor_log2.json")),
        ("singular_demo", include_str!("../../corpus/singular_demo.json")),
        ("pole_demo", include_str!("../../corpus/pole_demo.json")),
        ("lifted_demo", include_str!("../../corpus/lifted_demo.json")),
    ];

    pub fn names() -> impl Iterator<Item = &'static str> {
        DOCS.iter().map(|(n, _)| *n)
    }

    /// The raw JSON text of a bundled document.
    pub fn source(name: &str) -> Option<&'static str> {
        let name = name.strip_suffix(".json").unwrap_or(name);
        DOCS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
    }

    pub fn get(name: &str) -> Option<MahlerEquation> {
        source(name).map(|s| MahlerEquation::from_json(s).expect("bundled documents are valid"))
    }

    /// Names of the equations that have genuine power-series solutions
    /// convergent on the unit disk.
    pub const FUNCTIONS: &[&str] = &["powers2", "powers3", "thue_morse", "cantor", "floor_log2"];
}
