//! Constant-shape Z^d substitutions as configurations of instructions.
//!
//! A q-substitution assigns to every letter a block supported on [0, q); the
//! j-th instruction is the letter map gamma -> (S gamma)(j).  Everything else
//! in the crate (substitution matrix, coincidence matrix, expansion of
//! superblocks, substitution products) is built from the instructions.

use crate::error::{Error, Result};
use crate::matrix::{ExactMatrix, Rat};
use crate::zd::{digits, linear_index, Expansion, LatticePoint};
use num_bigint::BigInt;
use num_traits::One;

pub const DEFAULT_CELL_BUDGET: u64 = 1 << 26;

/// Ordered alphabet; the ordering fixes all matrix and vector indexing.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alphabet {
    letters: Vec<String>,
}

impl Alphabet {
    pub fn new(letters: Vec<String>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::invalid("alphabet must not be empty"));
        }
        for (i, a) in letters.iter().enumerate() {
            if letters[..i].contains(a) {
                return Err(Error::invalid(format!("alphabet letter '{a}' repeated")));
            }
        }
        Ok(Alphabet { letters })
    }

    pub fn of_size(s: usize) -> Self {
        Alphabet { letters: (0..s).map(|i| i.to_string()).collect() }
    }

    pub fn size(&self) -> usize {
        self.letters.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.letters[i]
    }

    pub fn names(&self) -> &[String] {
        &self.letters
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.letters.iter().position(|l| l == name)
    }

    /// Product alphabet in lexicographic pair order (left letter major).
    pub fn product(&self, other: &Alphabet) -> Alphabet {
        let sep = if self.letters.iter().chain(&other.letters).all(|l| l.chars().count() == 1) {
            ""
        } else {
            "|"
        };
        let letters = self
            .letters
            .iter()
            .flat_map(|a| other.letters.iter().map(move |b| format!("{a}{sep}{b}")))
            .collect();
        Alphabet { letters }
    }
}

/// A letter map A -> A, stored as an image table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Instruction(pub Vec<usize>);

impl Instruction {
    pub fn identity(s: usize) -> Self {
        Instruction((0..s).collect())
    }

    pub fn apply(&self, letter: usize) -> usize {
        self.0[letter]
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    /// Matrix-product composition: (a * b)(x) = a(b(x)).
    pub fn then_after(a: &Instruction, b: &Instruction) -> Instruction {
        Instruction(b.0.iter().map(|&x| a.0[x]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        for &x in &self.0 {
            if seen[x] {
                return false;
            }
            seen[x] = true;
        }
        true
    }

    pub fn commutes_with(&self, other: &Instruction) -> bool {
        Instruction::then_after(self, other) == Instruction::then_after(other, self)
    }

    /// The 0/1 column-stochastic matrix with entry (alpha, gamma) = 1 iff alpha = R(gamma).
    pub fn to_matrix(&self) -> ExactMatrix {
        let s = self.0.len();
        let mut m = ExactMatrix::zeros(s, s);
        for (gamma, &alpha) in self.0.iter().enumerate() {
            m[(alpha, gamma)] = Rat::one();
        }
        m
    }

    /// The pair map (a, b) -> (f(a), g(b)) on the product alphabet; this is the
    /// Kronecker product of the two instruction matrices, kept as a function.
    pub fn kron(f: &Instruction, g: &Instruction) -> Instruction {
        let (sf, sg) = (f.size(), g.size());
        let mut out = Vec::with_capacity(sf * sg);
        for a in 0..sf {
            for b in 0..sg {
                out.push(f.0[a] * sg + g.0[b]);
            }
        }
        Instruction(out)
    }
}

/// A rectangular block of letters supported on [0, shape), cells serialized
/// lexicographically with the last coordinate varying fastest.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Block {
    shape: LatticePoint,
    cells: Vec<usize>,
}

impl Block {
    pub fn new(shape: LatticePoint, cells: Vec<usize>) -> Result<Self> {
        let expected: BigInt = shape.coords().iter().product();
        if BigInt::from(cells.len()) != expected {
            return Err(Error::invalid(format!(
                "block over [0,{shape}) needs {expected} cells, found {}",
                cells.len()
            )));
        }
        Ok(Block { shape, cells })
    }

    pub fn single(dim: usize, letter: usize) -> Self {
        Block { shape: LatticePoint::ones(dim), cells: vec![letter] }
    }

    pub fn shape(&self) -> &LatticePoint {
        &self.shape
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn at(&self, j: &LatticePoint) -> Option<usize> {
        linear_index(j, &self.shape).map(|i| self.cells[i])
    }

    pub fn at_linear(&self, i: usize) -> usize {
        self.cells[i]
    }
}

/// Aperiodicity handling requested for a substitution.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AperiodicityPolicy {
    /// Run the one-dimensional two-neighborhood check.
    CheckPansiot,
    /// The input asserts aperiodicity (e.g. known by recognizability for d > 1).
    Asserted,
    Unknown,
}

impl AperiodicityPolicy {
    pub fn as_str(&self) -> &'static str {
        match self {
            AperiodicityPolicy::CheckPansiot => "check-pansiot",
            AperiodicityPolicy::Asserted => "asserted",
            AperiodicityPolicy::Unknown => "unknown",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "check-pansiot" => Some(AperiodicityPolicy::CheckPansiot),
            "asserted" => Some(AperiodicityPolicy::Asserted),
            "unknown" => Some(AperiodicityPolicy::Unknown),
            _ => None,
        }
    }
}

/// A q-substitution: one rule block over [0, q) per letter.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Substitution {
    q: Expansion,
    alphabet: Alphabet,
    rules: Vec<Block>,
    aperiodicity: AperiodicityPolicy,
}

impl Substitution {
    pub fn new(
        q: Expansion,
        alphabet: Alphabet,
        rules: Vec<Block>,
        aperiodicity: AperiodicityPolicy,
    ) -> Result<Self> {
        if rules.len() != alphabet.size() {
            return Err(Error::invalid(format!(
                "{} rules for {} letters",
                rules.len(),
                alphabet.size()
            )));
        }
        let shape = q.pow(1);
        for (i, r) in rules.iter().enumerate() {
            if r.shape() != &shape {
                return Err(Error::invalid(format!(
                    "rule '{}': block shape {} does not match q = {}",
                    alphabet.name(i),
                    r.shape(),
                    shape
                )));
            }
            if let Some(&bad) = r.cells().iter().find(|&&c| c >= alphabet.size()) {
                return Err(Error::invalid(format!(
                    "rule '{}': letter index {bad} out of range",
                    alphabet.name(i)
                )));
            }
        }
        Ok(Substitution { q, alphabet, rules, aperiodicity })
    }

    /// Convenience constructor from letter-index rule rows (d = 1 unless q says otherwise).
    pub fn from_rows(q: &[i64], s: usize, rows: &[&[usize]]) -> Result<Self> {
        let q = Expansion::from_i64(q).map_err(Error::invalid)?;
        let alphabet = Alphabet::of_size(s);
        let shape = q.pow(1);
        let rules = rows
            .iter()
            .map(|r| Block::new(shape.clone(), r.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Substitution::new(q, alphabet, rules, AperiodicityPolicy::Unknown)
    }

    pub fn with_policy(mut self, policy: AperiodicityPolicy) -> Self {
        self.aperiodicity = policy;
        self
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    pub fn expansion(&self) -> &Expansion {
        &self.q
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn size(&self) -> usize {
        self.alphabet.size()
    }

    pub fn rule(&self, letter: usize) -> &Block {
        &self.rules[letter]
    }

    pub fn aperiodicity_policy(&self) -> AperiodicityPolicy {
        self.aperiodicity
    }

    /// The j-th instruction, with j reduced mod q.
    pub fn instruction(&self, j: &LatticePoint) -> Instruction {
        let (rem, _) = crate::zd::divmod_qn(j, &self.q, 1);
        let idx = linear_index(&rem, &self.q.pow(1)).expect("reduced index in range");
        Instruction(self.rules.iter().map(|r| r.at_linear(idx)).collect())
    }

    /// All instructions in cell order, indexed linearly over [0, q).
    pub fn instructions(&self) -> Vec<Instruction> {
        let total = usize::try_from(self.q.total()).expect("Q fits usize");
        (0..total)
            .map(|idx| Instruction(self.rules.iter().map(|r| r.at_linear(idx)).collect()))
            .collect()
    }

    /// R_j^(n): the product of instructions over the first n digits of j.
    pub fn generalized_instruction(&self, j: &LatticePoint, n: u32) -> Instruction {
        let instr = self.instructions();
        let mut acc = Instruction::identity(self.size());
        for digit in digits(j, &self.q, n) {
            let idx = linear_index(&digit, &self.q.pow(1)).expect("digit in range");
            acc = Instruction::then_after(&acc, &instr[idx]);
        }
        acc
    }

    /// The superblock S^n(letter) over [0, q^n), by repeated inflation.
    pub fn expand(&self, letter: usize, n: u32, cell_budget: u64) -> Result<Block> {
        let cells_needed = self.q.total_pow(n);
        if cells_needed > BigInt::from(cell_budget) {
            return Err(Error::BudgetExceeded {
                what: format!("expansion to depth {n} needs {cells_needed} cells"),
                budget: cell_budget,
            });
        }
        let q_usize: Vec<usize> = self
            .q
            .q()
            .coords()
            .iter()
            .map(|c| usize::try_from(c).expect("q fits usize"))
            .collect();
        let d = self.dim();
        let mut cur = vec![letter];
        let mut side = vec![1usize; d]; // current shape q^m
        let q_total = usize::try_from(self.q.total()).expect("Q fits usize");
        for _ in 0..n {
            let new_side: Vec<usize> = side.iter().zip(&q_usize).map(|(a, b)| a * b).collect();
            let mut next = vec![0usize; cur.len() * q_total];
            // strides for the new shape, last coordinate fastest
            let mut stride = vec![1usize; d];
            for i in (0..d.saturating_sub(1)).rev() {
                stride[i] = stride[i + 1] * new_side[i + 1];
            }
            let mut a_coord = vec![0usize; d];
            for &gamma in cur.iter() {
                // base position of this cell's inflated block: coordinate a*q
                let mut base = 0usize;
                for i in 0..d {
                    base += a_coord[i] * q_usize[i] * stride[i];
                }
                let rule = &self.rules[gamma];
                let mut b_coord = vec![0usize; d];
                for bi in 0..q_total {
                    let mut pos = base;
                    for i in 0..d {
                        pos += b_coord[i] * stride[i];
                    }
                    next[pos] = rule.at_linear(bi);
                    // odometer over [0, q), last fastest
                    for i in (0..d).rev() {
                        b_coord[i] += 1;
                        if b_coord[i] < q_usize[i] {
                            break;
                        }
                        b_coord[i] = 0;
                    }
                }
                // odometer over [0, side), last fastest
                for i in (0..d).rev() {
                    a_coord[i] += 1;
                    if a_coord[i] < side[i] {
                        break;
                    }
                    a_coord[i] = 0;
                }
            }
            cur = next;
            side = new_side;
        }
        Block::new(self.q.pow(n), cur)
    }

    /// M_S: entry (alpha, gamma) counts occurrences of alpha in S(gamma).
    pub fn substitution_matrix(&self) -> ExactMatrix {
        let s = self.size();
        let mut m = ExactMatrix::zeros(s, s);
        for (gamma, rule) in self.rules.iter().enumerate() {
            for &alpha in rule.cells() {
                let v = &m[(alpha, gamma)] + Rat::one();
                m[(alpha, gamma)] = v;
            }
        }
        m
    }

    /// Substitution product: the q-substitution on the product alphabet whose
    /// j-th instruction is the Kronecker product of the factors' j-th instructions.
    pub fn product(&self, other: &Substitution) -> Result<Substitution> {
        if self.q != other.q {
            return Err(Error::invalid(format!(
                "substitution product needs matching expansions, got {} and {}",
                self.q.q(),
                other.q.q()
            )));
        }
        let alphabet = self.alphabet.product(&other.alphabet);
        let (sa, sb) = (self.size(), other.size());
        let shape = self.q.pow(1);
        let q_total = usize::try_from(self.q.total()).expect("Q fits usize");
        let mut rules = Vec::with_capacity(sa * sb);
        for a in 0..sa {
            for b in 0..sb {
                let cells: Vec<usize> = (0..q_total)
                    .map(|idx| self.rules[a].at_linear(idx) * sb + other.rules[b].at_linear(idx))
                    .collect();
                rules.push(Block::new(shape.clone(), cells)?);
            }
        }
        let policy = match (self.aperiodicity, other.aperiodicity) {
            // the product of aperiodic substitutions is aperiodic
            (AperiodicityPolicy::Asserted, AperiodicityPolicy::Asserted) => {
                AperiodicityPolicy::Asserted
            }
            _ => AperiodicityPolicy::Unknown,
        };
        Substitution::new(self.q.clone(), alphabet, rules, policy)
    }

    pub fn bisubstitution(&self) -> Substitution {
        self.product(self).expect("expansions match")
    }

    /// C_S = sum of R_j (x) R_j; equals the substitution matrix of the bisubstitution.
    pub fn coincidence_matrix(&self) -> ExactMatrix {
        let s2 = self.size() * self.size();
        let mut m = ExactMatrix::zeros(s2, s2);
        for instr in self.instructions() {
            let pair = Instruction::kron(&instr, &instr);
            for (gd, &ab) in pair.0.iter().enumerate() {
                let v = &m[(ab, gd)] + Rat::one();
                m[(ab, gd)] = v;
            }
        }
        m
    }

    /// The telescoped substitution S^h, with expansion q^h.
    pub fn telescope(&self, h: u32, cell_budget: u64) -> Result<Substitution> {
        if h == 0 {
            return Err(Error::invalid("telescoping exponent must be positive"));
        }
        if h == 1 {
            return Ok(self.clone());
        }
        let q = Expansion::new(self.q.pow(h)).map_err(Error::invalid)?;
        let rules = (0..self.size())
            .map(|g| self.expand(g, h, cell_budget))
            .collect::<Result<Vec<_>>>()?;
        Substitution::new(q, self.alphabet.clone(), rules, self.aperiodicity)
    }

    pub fn is_bijective(&self) -> bool {
        self.instructions().iter().all(Instruction::is_permutation)
    }

    pub fn is_commutative(&self) -> bool {
        let instr = self.instructions();
        instr
            .iter()
            .enumerate()
            .all(|(i, a)| instr[..i].iter().all(|b| a.commutes_with(b)))
    }

    /// Same instructions in a different arrangement (for configuration-invariance tests).
    pub fn permute_configuration(&self, perm: &[usize]) -> Result<Substitution> {
        let q_total = usize::try_from(self.q.total()).expect("Q fits usize");
        if perm.len() != q_total {
            return Err(Error::invalid("configuration permutation has wrong length"));
        }
        let shape = self.q.pow(1);
        let rules = (0..self.size())
            .map(|g| {
                let cells: Vec<usize> =
                    (0..q_total).map(|idx| self.rules[g].at_linear(perm[idx])).collect();
                Block::new(shape.clone(), cells)
            })
            .collect::<Result<Vec<_>>>()?;
        Substitution::new(self.q.clone(), self.alphabet.clone(), rules, self.aperiodicity)
    }
}

/// The standard worked examples, used by tests and as parse targets for the
/// bundled spec files.
pub mod zoo {
    use super::*;

    pub fn thue_morse() -> Substitution {
        Substitution::from_rows(&[2], 2, &[&[0, 1], &[1, 0]])
            .unwrap()
            .with_policy(AperiodicityPolicy::CheckPansiot)
    }

    pub fn queffelec_zeta() -> Substitution {
        Substitution::from_rows(&[3], 3, &[&[0, 0, 1], &[1, 2, 2], &[2, 1, 0]])
            .unwrap()
            .with_policy(AperiodicityPolicy::CheckPansiot)
    }

    pub fn rudin_shapiro() -> Substitution {
        Substitution::from_rows(&[2], 4, &[&[0, 2], &[3, 2], &[0, 1], &[3, 1]])
            .unwrap()
            .with_policy(AperiodicityPolicy::CheckPansiot)
    }

    /// The table tiling; cells listed as (0,0), (0,1), (1,0), (1,1) with the
    /// first coordinate horizontal and the second vertical.
    pub fn table() -> Substitution {
        Substitution::from_rows(
            &[2, 2],
            4,
            &[&[1, 3, 0, 0], &[0, 1, 2, 1], &[2, 2, 1, 3], &[3, 0, 3, 2]],
        )
        .unwrap()
        .with_policy(AperiodicityPolicy::Asserted)
    }

    /// Cyclic-group substitution of height 3 on Z/6Z: letter a maps to the
    /// word (a, a+1, a+2, a+3).
    pub fn height_h3() -> Substitution {
        let rows: Vec<Vec<usize>> = (0..6).map(|a| (0..4).map(|j| (a + j) % 6).collect()).collect();
        let refs: Vec<&[usize]> = rows.iter().map(|r| r.as_slice()).collect();
        Substitution::from_rows(&[4], 6, &refs)
            .unwrap()
            .with_policy(AperiodicityPolicy::CheckPansiot)
    }

    /// The imprimitive six-letter example: classes {1,3} and {2,5}, transient
    /// {4,6}, index of imprimitivity 2.  Letters are 1..6 mapped to indices 0..5.
    pub fn six_letter() -> Substitution {
        Substitution::from_rows(
            &[2],
            6,
            &[&[1, 4], &[0, 2], &[4, 1], &[3, 2], &[2, 0], &[1, 4]],
        )
        .unwrap()
        .with_policy(AperiodicityPolicy::CheckPansiot)
    }

    /// Substitution product of Thue-Morse and Rudin-Shapiro on 8 letters.
    pub fn tm_rs_product() -> Substitution {
        thue_morse().product(&rudin_shapiro()).unwrap()
    }
}
