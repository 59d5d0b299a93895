//! Products of projective spaces: Hodge polynomials, the `sl_2` representation
//! carried by their cohomology, and the three routes into `Z[q]` that the
//! commutative diagram identifies.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::fgl::cp_image;
use crate::poly::LaurentPoly;
use crate::report::VerificationReport;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VarietyError {
    #[error("Hodge number h^({i},{j}) is off the diagonal")]
    OffDiagonal { i: u32, j: u32 },
    #[error("representation has negative multiplicities")]
    Virtual,
    #[error("character is not a sum of irreducible characters")]
    NotACharacter,
    #[error("catalog line {line}: {msg}")]
    Catalog { line: usize, msg: String },
}

/// `CP^(n_1) x ... x CP^(n_r)`; the empty product is the point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Variety {
    pub name: Option<String>,
    pub factors: Vec<u32>,
}

impl Variety {
    pub fn product(factors: &[u32]) -> Self {
        Variety { name: None, factors: factors.to_vec() }
    }

    pub fn point() -> Self {
        Self::product(&[])
    }

    pub fn dim(&self) -> u32 {
        self.factors.iter().sum()
    }

    /// `X x Y`.
    pub fn times(&self, other: &Variety) -> Variety {
        Variety::product(&[self.factors.as_slice(), other.factors.as_slice()].concat())
    }

    pub fn label(&self) -> String {
        if let Some(n) = &self.name {
            return n.clone();
        }
        if self.factors.is_empty() {
            return "point".into();
        }
        self.factors.iter().map(|n| format!("CP{n}")).collect::<Vec<_>>().join("x")
    }
}

/// All ordered products `CP^(n_1) x ... x CP^(n_r)` with exactly `factors`
/// factors and each `n_i <= max_dim`. Since `CP^0` is a point, this covers every
/// product with at most `factors` nontrivial factors.
pub fn products_of_projective_spaces(factors: usize, max_dim: u32) -> Vec<Variety> {
    let mut layer = vec![Vec::<u32>::new()];
    for _ in 0..factors {
        layer = layer.iter().flat_map(|f| (0..=max_dim).map(move |n| [f.as_slice(), &[n]].concat())).collect();
    }
    layer.iter().map(|f| Variety::product(f)).collect()
}

/// Parses lines `name n1 n2 ...`; blank lines and `#` comments are skipped.
pub fn parse_catalog(text: &str) -> Result<Vec<Variety>, VarietyError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let name = words.next().expect("non-empty line").to_string();
        let factors = words
            .map(|w| {
                w.parse::<u32>().map_err(|_| VarietyError::Catalog {
                    line: idx + 1,
                    msg: format!("'{w}' is not a non-negative integer"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(Variety { name: Some(name), factors });
    }
    Ok(out)
}

/// `sum h^(i,j) Y^i Z^j` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HodgePoly {
    terms: BTreeMap<(u32, u32), i64>,
}

impl HodgePoly {
    pub fn one() -> Self {
        Self::from_terms([((0, 0), 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), i64)>) -> Self {
        let mut out = HodgePoly::default();
        for (k, c) in terms {
            *out.terms.entry(k).or_insert(0) += c;
        }
        out.terms.retain(|_, c| *c != 0);
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &i64)> {
        self.terms.iter()
    }

    pub fn h(&self, i: u32, j: u32) -> i64 {
        self.terms.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .flat_map(|(&(a, b), &x)| other.terms.iter().map(move |(&(c, d), &y)| ((a + c, b + d), x * y))),
        )
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(&(i, j), &c)| self.h(j, i) == c)
    }
}

impl fmt::Display for HodgePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mono = |v: char, e: u32| match e {
            0 => None,
            1 => Some(v.to_string()),
            _ => Some(format!("{v}^{e}")),
        };
        for (n, (&(i, j), &c)) in self.terms.iter().enumerate() {
            let vars: Vec<String> = [mono('Y', i), mono('Z', j)].into_iter().flatten().collect();
            let sign = if c < 0 { "-" } else { "+" };
            if n == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (c.abs(), vars.is_empty()) {
                (a, true) => write!(f, "{a}")?,
                (1, false) => write!(f, "{}", vars.join("*"))?,
                (a, false) => write!(f, "{a}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

/// `prod_i (1 + YZ + ... + (YZ)^(n_i))`.
pub fn hodge(v: &Variety) -> HodgePoly {
    v.factors.iter().fold(HodgePoly::one(), |acc, &n| acc.mul(&HodgePoly::from_terms((0..=n).map(|k| ((k, k), 1)))))
}

/// Result of specialising a Hodge polynomial to the Euler characteristic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerSpecialization {
    /// `sum (-1)^(i+j) h^(i,j)`.
    pub chi: i64,
    /// Whether `Y -> -Y, Z -> -1/Y`, times `Y^dim`, gives exactly `chi Y^dim`.
    pub ok: bool,
    /// The literal substitution `Y -> iY, Z -> iY`: real coefficients by power of `Y`.
    pub literal: BTreeMap<u32, i64>,
    /// Whether the literal substitution produced an imaginary part.
    pub literal_imaginary: bool,
    /// Whether the literal substitution gives `chi Y^dim`.
    pub literal_ok: bool,
}

pub fn euler_specialize(h: &HodgePoly, dim: u32) -> EulerSpecialization {
    let chi: i64 = h.terms().map(|(&(i, j), &c)| if (i + j) % 2 == 0 { c } else { -c }).sum();

    let mut graded: BTreeMap<i64, i64> = BTreeMap::new();
    for (&(i, j), &c) in h.terms() {
        let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
        *graded.entry(dim as i64 + i as i64 - j as i64).or_insert(0) += sign * c;
    }
    graded.retain(|_, c| *c != 0);
    let expected: BTreeMap<i64, i64> = if chi == 0 { BTreeMap::new() } else { [(dim as i64, chi)].into() };

    let mut literal: BTreeMap<u32, i64> = BTreeMap::new();
    let mut literal_imaginary = false;
    for (&(i, j), &c) in h.terms() {
        let d = i + j;
        if d % 2 == 1 {
            literal_imaginary = true;
            continue;
        }
        let sign = if (d / 2) % 2 == 0 { 1 } else { -1 };
        *literal.entry(d).or_insert(0) += sign * c;
    }
    literal.retain(|_, c| *c != 0);
    let literal_expected: BTreeMap<u32, i64> = if chi == 0 { BTreeMap::new() } else { [(dim, chi)].into() };
    let literal_ok = !literal_imaginary && literal == literal_expected;

    EulerSpecialization { chi, ok: graded == expected, literal, literal_imaginary, literal_ok }
}

/// `YZ -> q` on a Hodge polynomial with only diagonal terms.
pub fn yz_to_q(h: &HodgePoly) -> Result<Scalar, VarietyError> {
    let mut acc = Scalar::zero();
    for (&(i, j), &c) in h.terms() {
        if i != j {
            return Err(VarietyError::OffDiagonal { i, j });
        }
        acc = acc + Scalar::q_pow(i as i64).scale(&BigRational::from_integer(c.into()));
    }
    Ok(acc)
}

/// A virtual `sl_2` representation: multiplicity of each irreducible `V_n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SL2Rep {
    mult: BTreeMap<u32, i64>,
}

impl SL2Rep {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `V_n`, of dimension `n + 1`.
    pub fn irreducible(n: u32) -> Self {
        Self::from_multiplicities([(n, 1)])
    }

    pub fn from_multiplicities(m: impl IntoIterator<Item = (u32, i64)>) -> Self {
        let mut out = SL2Rep::default();
        for (n, c) in m {
            *out.mult.entry(n).or_insert(0) += c;
        }
        out.mult.retain(|_, c| *c != 0);
        out
    }

    pub fn multiplicities(&self) -> impl Iterator<Item = (&u32, &i64)> {
        self.mult.iter()
    }

    pub fn multiplicity(&self, n: u32) -> i64 {
        self.mult.get(&n).copied().unwrap_or(0)
    }

    pub fn is_effective(&self) -> bool {
        self.mult.values().all(|&c| c > 0)
    }

    pub fn top_weight(&self) -> Option<u32> {
        self.mult.keys().next_back().copied()
    }

    pub fn dim(&self) -> i64 {
        self.mult.iter().map(|(&n, &c)| (n as i64 + 1) * c).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_multiplicities(self.mult.iter().chain(other.mult.iter()).map(|(&n, &c)| (n, c)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_multiplicities(
            self.mult.iter().map(|(&n, &c)| (n, c)).chain(other.mult.iter().map(|(&n, &c)| (n, -c))),
        )
    }
}

impl fmt::Display for SL2Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mult.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.mult.iter().rev().map(|(&n, &c)| if c == 1 { format!("V{n}") } else { format!("{c}*V{n}") }).collect();
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

/// Clebsch-Gordan: `V_m (x) V_n = V_(m+n) + V_(m+n-2) + ... + V_|m-n|`.
pub fn cg_tensor(a: &SL2Rep, b: &SL2Rep) -> SL2Rep {
    SL2Rep::from_multiplicities(a.mult.iter().flat_map(|(&m, &x)| {
        b.mult.iter().flat_map(move |(&n, &y)| {
            let lo = m.abs_diff(n);
            (0..=m.min(n)).map(move |k| (lo + 2 * k, x * y))
        })
    }))
}

fn string_poly(n: u32) -> LaurentPoly {
    // s^n + s^(n-2) + ... + s^-n
    let mut coeffs = vec![0i64; 2 * n as usize + 1];
    for j in 0..=n as usize {
        coeffs[2 * j] = 1;
    }
    LaurentPoly::from_int_coeffs(-(n as i64), &coeffs)
}

fn character_poly(r: &SL2Rep) -> LaurentPoly {
    r.mult
        .iter()
        .fold(LaurentPoly::zero(), |acc, (&n, &c)| acc.add(&string_poly(n).scale(&BigRational::from_integer(c.into()))))
}

/// `sum_n m_n (s^n + s^(n-2) + ... + s^-n)`.
pub fn character(r: &SL2Rep) -> Scalar {
    Scalar::from_poly(character_poly(r))
}

/// Inverse of [`character`]: peels off the highest weight repeatedly.
pub fn decompose_character(chi: &Scalar) -> Result<SL2Rep, VarietyError> {
    if !chi.is_polynomial() {
        return Err(VarietyError::NotACharacter);
    }
    let mut rest = chi.numerator().clone();
    let mut out = BTreeMap::new();
    while let Some(top) = rest.degree() {
        let c = rest.coeff(top);
        if top < 0 || !c.is_integer() {
            return Err(VarietyError::NotACharacter);
        }
        let c_int = c.to_integer().to_i64().ok_or(VarietyError::NotACharacter)?;
        out.insert(top as u32, c_int);
        rest = rest.sub(&string_poly(top as u32).scale(&c));
    }
    Ok(SL2Rep { mult: out })
}

/// `s^w` times the character, `w` the top weight; `V_n` maps to `1 + q + ... + q^n`.
pub fn qdim_normalized(r: &SL2Rep) -> Result<Scalar, VarietyError> {
    if !r.is_effective() {
        return Err(VarietyError::Virtual);
    }
    let w = r.top_weight().unwrap_or(0);
    Ok(&Scalar::s_pow(w as i64) * &character(r))
}

/// The `k`-th exterior power, from `e_k` of the weights.
pub fn lambda_rep(r: &SL2Rep, k: usize) -> Result<SL2Rep, VarietyError> {
    if !r.is_effective() {
        return Err(VarietyError::Virtual);
    }
    let weights: Vec<i64> = r
        .mult
        .iter()
        .flat_map(|(&n, &c)| (0..c).flat_map(move |_| (0..=n as i64).map(move |j| n as i64 - 2 * j)))
        .collect();
    // e[j] = e_j of the weights seen so far, as Laurent polynomials in s
    let mut e = vec![LaurentPoly::zero(); k + 1];
    e[0] = LaurentPoly::one();
    for &w in &weights {
        let x = LaurentPoly::monomial(BigRational::from_integer(BigInt::from(1)), w);
        for j in (1..=k).rev() {
            e[j] = e[j].add(&e[j - 1].mul(&x));
        }
    }
    let rep = decompose_character(&Scalar::from_poly(e[k].clone()))?;
    assert!(rep.is_effective() || rep.mult.is_empty(), "exterior powers are effective");
    Ok(rep)
}

/// Hard Lefschetz makes `H*(CP^n)` the irreducible `V_n`; products carry the
/// diagonal action.
pub fn rep_of_variety(v: &Variety) -> SL2Rep {
    v.factors.iter().fold(SL2Rep::irreducible(0), |acc, &n| cg_tensor(&acc, &SL2Rep::irreducible(n)))
}

pub const DIAGRAM_HODGE_SL2: &str = "Hodge route = sl2 route";
pub const DIAGRAM_HODGE_ORIENTATION: &str = "Hodge route = orientation route";
pub const DIAGRAM_SL2_ORIENTATION: &str = "sl2 route = orientation route";

/// The three images of `v` in `Z[q]`.
pub fn diagram_routes(v: &Variety) -> (Scalar, Scalar, Scalar) {
    let hodge_route = yz_to_q(&hodge(v)).expect("products of projective spaces are diagonal");
    let sl2_route = qdim_normalized(&rep_of_variety(v)).expect("cohomology is effective");
    let orientation = v.factors.iter().fold(Scalar::one(), |acc, &n| &acc * &cp_image(n as u64));
    (hodge_route, sl2_route, orientation)
}

pub fn diagram_check(v: &Variety) -> VerificationReport {
    let (h, r, o) = diagram_routes(v);
    let mut report = VerificationReport::new();
    for (name, a, b) in
        [(DIAGRAM_HODGE_SL2, &h, &r), (DIAGRAM_HODGE_ORIENTATION, &h, &o), (DIAGRAM_SL2_ORIENTATION, &r, &o)]
    {
        report.push(name, &[], a == b, (a != b).then(|| format!("{a} vs {b}")));
    }
    report
}
