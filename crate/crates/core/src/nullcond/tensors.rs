use std::fmt::Write as _;

use super::{NullError, Result};

/// Greek index range.
pub const DIM: usize = 4;

/// Which structural constraints [`CoefficientTensors::validate`] enforces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Regime {
    /// Only the symmetry of the quasilinear coefficients.
    #[default]
    General,
    /// Wave–Klein-Gordon regime: additionally the structural zeros on
    /// `B`, `Q` and `R` that keep wave components out of slowly decaying slots.
    WaveKg,
}

/// Constant coefficient arrays of a quadratic wave–Klein-Gordon system.
///
/// Component indices are 1-based in the public API (`1..=j0` wave, `j0+1..=j0+k0`
/// Klein-Gordon); Greek indices are `0..=3`.
///
/// * `A_i^{jαβγk}`: `G_i^{jαβ} ∋ A ∂_γ w_k`
/// * `B_i^{jαβk}`: `G_i^{jαβ} ∋ B w_k`
/// * `P_i^{αβjk}`: `F_i ∋ P ∂_α w_j ∂_β w_k`
/// * `Q_i^{αjk}`: `F_i ∋ Q w_j ∂_α w_k`
/// * `R_i^{jk}`: `F_i ∋ R w_j w_k`
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTensors {
    pub j0: usize,
    pub k0: usize,
    pub regime: Regime,
    a: Vec<f64>,
    b: Vec<f64>,
    p: Vec<f64>,
    q: Vec<f64>,
    r: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorKind {
    A,
    B,
    P,
    Q,
    R,
}

impl TensorKind {
    pub const ALL: [TensorKind; 5] = [
        TensorKind::A,
        TensorKind::B,
        TensorKind::P,
        TensorKind::Q,
        TensorKind::R,
    ];

    pub fn letter(&self) -> char {
        match self {
            TensorKind::A => 'A',
            TensorKind::B => 'B',
            TensorKind::P => 'P',
            TensorKind::Q => 'Q',
            TensorKind::R => 'R',
        }
    }

    /// Index layout as `true` for component slots and `false` for Greek slots,
    /// in file order (after the tensor letter).
    pub fn slots(&self) -> &'static [bool] {
        match self {
            TensorKind::A => &[true, true, false, false, false, true],
            TensorKind::B => &[true, true, false, false, true],
            TensorKind::P => &[true, false, false, true, true],
            TensorKind::Q => &[true, false, true, true],
            TensorKind::R => &[true, true, true],
        }
    }
}

impl CoefficientTensors {
    pub fn zeros(j0: usize, k0: usize) -> Self {
        let n = j0 + k0;
        let d = DIM;
        CoefficientTensors {
            j0,
            k0,
            regime: Regime::General,
            a: vec![0.0; n * n * d * d * d * n],
            b: vec![0.0; n * n * d * d * n],
            p: vec![0.0; n * d * d * n * n],
            q: vec![0.0; n * d * n * n],
            r: vec![0.0; n * n * n],
        }
    }

    /// Number of components `j0 + k0`.
    pub fn n(&self) -> usize {
        self.j0 + self.k0
    }

    pub fn is_wave(&self, component: usize) -> bool {
        (1..=self.j0).contains(&component)
    }

    fn store(&self, kind: TensorKind) -> &Vec<f64> {
        match kind {
            TensorKind::A => &self.a,
            TensorKind::B => &self.b,
            TensorKind::P => &self.p,
            TensorKind::Q => &self.q,
            TensorKind::R => &self.r,
        }
    }

    fn store_mut(&mut self, kind: TensorKind) -> &mut Vec<f64> {
        match kind {
            TensorKind::A => &mut self.a,
            TensorKind::B => &mut self.b,
            TensorKind::P => &mut self.p,
            TensorKind::Q => &mut self.q,
            TensorKind::R => &mut self.r,
        }
    }

    /// Flat offset of `idx` (file order), or `None` when out of range.
    fn offset(&self, kind: TensorKind, idx: &[usize]) -> Option<usize> {
        let slots = kind.slots();
        if idx.len() != slots.len() {
            return None;
        }
        let n = self.n();
        let mut off = 0;
        for (&component, &i) in slots.iter().zip(idx) {
            let (lo, len) = if component { (1, n) } else { (0, DIM) };
            if i < lo || i - lo >= len {
                return None;
            }
            off = off * len + (i - lo);
        }
        Some(off)
    }

    pub fn get(&self, kind: TensorKind, idx: &[usize]) -> f64 {
        match self.offset(kind, idx) {
            Some(o) => self.store(kind)[o],
            None => panic!("index {idx:?} out of range for {}", kind.letter()),
        }
    }

    pub fn set(&mut self, kind: TensorKind, idx: &[usize], value: f64) -> Result<()> {
        let o = self.offset(kind, idx).ok_or_else(|| {
            NullError::Index(format!(
                "{} {idx:?} out of range for n = {}",
                kind.letter(),
                self.n()
            ))
        })?;
        self.store_mut(kind)[o] = value;
        Ok(())
    }

    /// `A_i^{jαβγk}`.
    pub fn a(&self, i: usize, j: usize, al: usize, be: usize, ga: usize, k: usize) -> f64 {
        self.get(TensorKind::A, &[i, j, al, be, ga, k])
    }

    /// `B_i^{jαβk}`.
    pub fn b(&self, i: usize, j: usize, al: usize, be: usize, k: usize) -> f64 {
        self.get(TensorKind::B, &[i, j, al, be, k])
    }

    /// `P_i^{αβjk}`.
    pub fn p(&self, i: usize, al: usize, be: usize, j: usize, k: usize) -> f64 {
        self.get(TensorKind::P, &[i, al, be, j, k])
    }

    /// `Q_i^{αjk}`.
    pub fn q(&self, i: usize, al: usize, j: usize, k: usize) -> f64 {
        self.get(TensorKind::Q, &[i, al, j, k])
    }

    /// `R_i^{jk}`.
    pub fn r(&self, i: usize, j: usize, k: usize) -> f64 {
        self.get(TensorKind::R, &[i, j, k])
    }

    /// Largest coefficient magnitude `K`.
    pub fn magnitude(&self) -> f64 {
        TensorKind::ALL
            .iter()
            .flat_map(|k| self.store(*k).iter())
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Every nonzero entry with its file-order indices.
    pub fn nonzeros(&self, kind: TensorKind) -> Vec<(Vec<usize>, f64)> {
        let slots = kind.slots();
        let n = self.n();
        let dims: Vec<usize> = slots.iter().map(|&c| if c { n } else { DIM }).collect();
        let mut out = Vec::new();
        for (flat, &v) in self.store(kind).iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            let mut rem = flat;
            let mut idx = vec![0; dims.len()];
            for s in (0..dims.len()).rev() {
                idx[s] = rem % dims[s] + usize::from(slots[s]);
                rem /= dims[s];
            }
            out.push((idx, v));
        }
        out
    }

    /// Whether any quasilinear coefficient is nonzero.
    pub fn is_quasilinear(&self) -> bool {
        self.a.iter().chain(&self.b).any(|v| *v != 0.0)
    }

    /// Checks `G_i^{jαβ} = G_j^{iβα}` on `A`, `B`, and the structural zeros when
    /// the regime asks for them.
    pub fn validate(&self) -> Result<()> {
        let tol = 1e-12 * self.magnitude().max(1.0);
        for (idx, v) in self.nonzeros(TensorKind::A) {
            let (i, j, al, be, ga, k) = (idx[0], idx[1], idx[2], idx[3], idx[4], idx[5]);
            let w = self.a(j, i, be, al, ga, k);
            if (v - w).abs() > tol {
                return Err(NullError::Symmetry(format!(
                    "A {i} {j} {al} {be} {ga} {k} = {v} but A {j} {i} {be} {al} {ga} {k} = {w}"
                )));
            }
        }
        for (idx, v) in self.nonzeros(TensorKind::B) {
            let (i, j, al, be, k) = (idx[0], idx[1], idx[2], idx[3], idx[4]);
            let w = self.b(j, i, be, al, k);
            if (v - w).abs() > tol {
                return Err(NullError::Symmetry(format!(
                    "B {i} {j} {al} {be} {k} = {v} but B {j} {i} {be} {al} {k} = {w}"
                )));
            }
        }
        if self.regime == Regime::WaveKg {
            self.validate_structural_zeros()?;
        }
        Ok(())
    }

    fn validate_structural_zeros(&self) -> Result<()> {
        let fail = |what: String| Err(NullError::StructuralZero(what));
        for (idx, v) in self.nonzeros(TensorKind::B) {
            if self.is_wave(idx[4]) {
                return fail(format!(
                    "B {} {} {} {} {} = {v}: B must vanish on a wave last index",
                    idx[0], idx[1], idx[2], idx[3], idx[4]
                ));
            }
        }
        for (idx, v) in self.nonzeros(TensorKind::Q) {
            if self.is_wave(idx[3]) {
                return fail(format!(
                    "Q {} {} {} {} = {v}: Q must vanish on a wave last index",
                    idx[0], idx[1], idx[2], idx[3]
                ));
            }
        }
        for (idx, v) in self.nonzeros(TensorKind::R) {
            if self.is_wave(idx[1]) {
                return fail(format!("R {} {} {} = {v}: R must vanish when its first upper index is a wave component", idx[0], idx[1], idx[2]));
            }
        }
        Ok(())
    }

    /// Text form accepted by [`load_tensors`]; floats use a round-trip representation.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "system {} {}", self.j0, self.k0);
        if self.regime == Regime::WaveKg {
            let _ = writeln!(s, "regime wave-kg");
        }
        for kind in TensorKind::ALL {
            for (idx, v) in self.nonzeros(kind) {
                let _ = write!(s, "{}", kind.letter());
                for i in idx {
                    let _ = write!(s, " {i}");
                }
                let _ = writeln!(s, " {v:?}");
            }
        }
        s
    }
}

/// Parses the line-oriented tensor format.
///
/// ```text
/// # comment
/// system 1 1          # j0 k0, defaults 1 1
/// regime wave-kg      # optional, enables structural-zero checks
/// P 1 0 0 1 1 1.0     # P i alpha beta j k value
/// ```
///
/// Entries may appear before or after `system` only if they fit its sizes;
/// `system` must precede every entry.
pub fn load_tensors(text: &str) -> Result<CoefficientTensors> {
    let mut tensors = CoefficientTensors::zeros(1, 1);
    let mut seen_entry = false;
    let mut seen_system = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(content);
        let Some(&(col0, head)) = tokens.first() else {
            continue;
        };
        let err = |col: usize, msg: String| NullError::Parse {
            line: line_no,
            column: col,
            message: msg,
        };
        let parse_usize = |col: usize, tok: &str| -> Result<usize> {
            tok.parse::<usize>().map_err(|_| {
                err(
                    col,
                    format!("expected a non-negative integer, found `{tok}`"),
                )
            })
        };
        match head {
            "system" => {
                if seen_entry || seen_system {
                    return Err(err(
                        col0,
                        "`system` must appear once, before any entry".into(),
                    ));
                }
                if tokens.len() != 3 {
                    return Err(err(col0, "`system` takes two integers: j0 k0".into()));
                }
                let j0 = parse_usize(tokens[1].0, tokens[1].1)?;
                let k0 = parse_usize(tokens[2].0, tokens[2].1)?;
                if j0 + k0 == 0 {
                    return Err(err(
                        tokens[1].0,
                        "system needs at least one component".into(),
                    ));
                }
                let regime = tensors.regime;
                tensors = CoefficientTensors::zeros(j0, k0);
                tensors.regime = regime;
                seen_system = true;
            }
            "regime" => {
                if tokens.len() != 2 {
                    return Err(err(col0, "`regime` takes one word".into()));
                }
                tensors.regime = match tokens[1].1 {
                    "wave-kg" => Regime::WaveKg,
                    "general" => Regime::General,
                    other => return Err(err(tokens[1].0, format!("unknown regime `{other}`"))),
                };
            }
            _ => {
                let kind = match head {
                    "A" => TensorKind::A,
                    "B" => TensorKind::B,
                    "P" => TensorKind::P,
                    "Q" => TensorKind::Q,
                    "R" => TensorKind::R,
                    other => return Err(err(col0, format!("unknown directive `{other}`"))),
                };
                let slots = kind.slots();
                if tokens.len() != slots.len() + 2 {
                    return Err(err(
                        col0,
                        format!(
                            "{head} takes {} indices and a value, found {} fields",
                            slots.len(),
                            tokens.len() - 1
                        ),
                    ));
                }
                let mut idx = Vec::with_capacity(slots.len());
                for (s, &component) in slots.iter().enumerate() {
                    let (col, tok) = tokens[s + 1];
                    let i = parse_usize(col, tok)?;
                    let ok = if component {
                        (1..=tensors.n()).contains(&i)
                    } else {
                        i < DIM
                    };
                    if !ok {
                        let range = if component {
                            format!("1..={}", tensors.n())
                        } else {
                            "0..=3".into()
                        };
                        return Err(err(col, format!("index {i} outside {range}")));
                    }
                    idx.push(i);
                }
                let (col, tok) = tokens[slots.len() + 1];
                let value: f64 = tok
                    .parse()
                    .map_err(|_| err(col, format!("expected a number, found `{tok}`")))?;
                if !value.is_finite() {
                    return Err(err(col, "coefficient must be finite".into()));
                }
                tensors.set(kind, &idx, value)?;
                seen_entry = true;
            }
        }
    }
    tensors.validate()?;
    Ok(tensors)
}

/// Whitespace-separated tokens with 1-based column numbers.
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (pos, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(pos),
            (true, Some(s)) => {
                out.push((line[..s].chars().count() + 1, &line[s..pos]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((line[..s].chars().count() + 1, &line[s..]));
    }
    out
}

/// Named classical quadratic forms on wave components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicalForm {
    /// `∂_t u ∂_t u − ∇u·∇u` on one wave.
    Q0,
    /// `∂_α u ∂_β v − ∂_β u ∂_α v` on two waves.
    Antisymmetric(usize, usize),
    /// `(∂_t u)²` on one wave.
    TimeSquared,
    /// `∂_t u ∂_t v` on two waves.
    TimeProduct,
}

impl ClassicalForm {
    pub fn tensors(&self) -> CoefficientTensors {
        let mut c;
        match *self {
            ClassicalForm::Q0 => {
                c = CoefficientTensors::zeros(1, 0);
                c.set(TensorKind::P, &[1, 0, 0, 1, 1], 1.0).unwrap();
                for a in 1..DIM {
                    c.set(TensorKind::P, &[1, a, a, 1, 1], -1.0).unwrap();
                }
            }
            ClassicalForm::Antisymmetric(al, be) => {
                c = CoefficientTensors::zeros(2, 0);
                if al != be {
                    c.set(TensorKind::P, &[1, al, be, 1, 2], 1.0).unwrap();
                    c.set(TensorKind::P, &[1, be, al, 1, 2], -1.0).unwrap();
                }
            }
            ClassicalForm::TimeSquared => {
                c = CoefficientTensors::zeros(1, 0);
                c.set(TensorKind::P, &[1, 0, 0, 1, 1], 1.0).unwrap();
            }
            ClassicalForm::TimeProduct => {
                c = CoefficientTensors::zeros(2, 0);
                c.set(TensorKind::P, &[1, 0, 0, 1, 2], 1.0).unwrap();
            }
        }
        c
    }
}
