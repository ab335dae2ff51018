//! Dense linear algebra over GF(2).
//!
//! Every matrix in this crate (Rédei, Monsky, the descent matrices and the
//! symmetric matrices of the counting experiments) lives here. Matrices are
//! bit-packed by row; sizes stay below a few dozen rows, so plain Gaussian
//! elimination is all we need.

const WORD: usize = 64;

/// Column vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    data: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            data: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b & 1 == 1);
        }
        v
    }

    pub fn ones(len: usize) -> Self {
        BitVec::from_bits(&vec![1u8; len])
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.data[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len);
        let (w, s) = (i / WORD, i % WORD);
        if bit {
            self.data[w] |= 1 << s;
        } else {
            self.data[w] &= !(1 << s);
        }
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter_bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// All-ones vector minus self (used for the complement vector x0 - x).
    pub fn complement(&self) -> BitVec {
        let mut out = BitVec::ones(self.len);
        out.xor_assign(self);
        out
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for b in self.iter_bits() {
            write!(f, "{}", u8::from(b))?;
        }
        write!(f, "]")
    }
}

/// Dense matrix over GF(2), bit-packed by row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(WORD).max(1);
        BitMatrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Build from explicit 0/1 entries; rows must have equal length.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = BitMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b & 1 == 1);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols);
        self.data[i * self.words + j / WORD] >> (j % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        assert!(i < self.rows && j < self.cols);
        let w = i * self.words + j / WORD;
        let s = j % WORD;
        if bit {
            self.data[w] |= 1 << s;
        } else {
            self.data[w] &= !(1 << s);
        }
    }

    /// Copy `block` into self with upper-left corner at (r0, c0).
    pub fn paste(&mut self, r0: usize, c0: usize, block: &BitMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j));
            }
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "dimension mismatch in mul_vec");
        let mut out = BitVec::zeros(self.rows);
        for i in 0..self.rows {
            let row = &self.data[i * self.words..(i + 1) * self.words];
            let mut acc = 0u64;
            for (a, b) in row.iter().zip(&v.data) {
                acc ^= a & b;
            }
            out.set(i, acc.count_ones() % 2 == 1);
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    fn xor_row(&mut self, dst: usize, src: usize) {
        for k in 0..self.words {
            let v = self.data[src * self.words + k];
            self.data[dst * self.words + k] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.words {
            self.data.swap(a * self.words + k, b * self.words + k);
        }
    }

    /// Reduced row echelon form; returns (rref, pivot column per pivot row).
    fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            if let Some(p) = (r..m.rows).find(|&i| m.get(i, c)) {
                m.swap_rows(r, p);
                for i in 0..m.rows {
                    if i != r && m.get(i, c) {
                        m.xor_row(i, r);
                    }
                }
                pivots.push(c);
                r += 1;
            }
        }
        (m, pivots)
    }

    /// Row rank over GF(2).
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel {v : M v = 0}, in ascending free-column order.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let (r, pivots) = self.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if pivot_set.contains(&f) {
                continue;
            }
            let mut v = BitVec::zeros(self.cols);
            v.set(f, true);
            for (row, &pc) in pivots.iter().enumerate() {
                if r.get(row, f) {
                    v.set(pc, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// One particular solution of M v = w, or None when w is outside the image.
    ///
    /// Free variables are set to zero, so the answer is the lexicographically
    /// first solution under the elimination pivot order.
    pub fn solve(&self, w: &BitVec) -> Option<BitVec> {
        assert_eq!(w.len(), self.rows, "rhs length must equal row count");
        // Eliminate on the augmented matrix [M | w].
        let mut aug = BitMatrix::zeros(self.rows, self.cols + 1);
        aug.paste(0, 0, self);
        for i in 0..self.rows {
            aug.set(i, self.cols, w.get(i));
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent row 0 ... 0 | 1
        }
        let mut v = BitVec::zeros(self.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            v.set(pc, r.get(row, self.cols));
        }
        Some(v)
    }

    /// Iterate over every element of the kernel (2^nullity vectors).
    pub fn kernel_elements(&self) -> Vec<BitVec> {
        let basis = self.kernel_basis();
        let mut out = Vec::with_capacity(1 << basis.len());
        for mask in 0u64..(1 << basis.len()) {
            let mut v = BitVec::zeros(self.cols);
            for (i, b) in basis.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    v.xor_assign(b);
                }
            }
            out.push(v);
        }
        out
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                write!(f, "{}", u8::from(self.get(i, j)))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(2).rank(), 2);
        assert_eq!(BitMatrix::zeros(3, 3).rank(), 0);
        let m = BitMatrix::from_rows(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(BitMatrix::identity(2).kernel_basis().is_empty());
        let m = BitMatrix::from_rows(&[vec![1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], BitVec::from_bits(&[1, 1]));
        let m = BitMatrix::from_rows(&[vec![1, 1], vec![1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k, vec![BitVec::from_bits(&[1, 1])]);
        // oracle: enumerate all four vectors
        for v in [[0u8, 0], [0, 1], [1, 0], [1, 1]] {
            let bv = BitVec::from_bits(&v);
            let in_kernel = m.mul_vec(&bv).is_zero();
            assert_eq!(in_kernel, v == [0, 0] || v == [1, 1]);
        }
    }

    #[test]
    fn solve_examples() {
        let id = BitMatrix::identity(2);
        let w = BitVec::from_bits(&[1, 0]);
        assert_eq!(id.solve(&w), Some(BitVec::from_bits(&[1, 0])));

        let z = BitMatrix::zeros(2, 2);
        assert_eq!(z.solve(&w), None);

        let m = BitMatrix::from_rows(&[vec![1, 1], vec![1, 1]]);
        let w = BitVec::from_bits(&[1, 1]);
        let v = m.solve(&w).expect("solvable");
        assert_eq!(m.mul_vec(&v), w);
        // enumeration oracle: some solution exists among all four vectors
        assert!([[0u8, 1], [1, 0]]
            .iter()
            .any(|bits| m.mul_vec(&BitVec::from_bits(bits)) == w));
    }

    #[test]
    fn solve_empty_matrix() {
        let m = BitMatrix::zeros(0, 0);
        let v = m.solve(&BitVec::zeros(0)).unwrap();
        assert!(v.is_empty());
        assert_eq!(m.kernel_elements().len(), 1);
    }

    /// Independent rank oracle: size of the row span, enumerated explicitly.
    fn span_rank(m: &BitMatrix) -> usize {
        assert!(m.cols <= 16);
        let rows: Vec<u32> = (0..m.rows)
            .map(|i| (0..m.cols).fold(0u32, |acc, j| acc | (u32::from(m.get(i, j)) << j)))
            .collect();
        let mut span = std::collections::HashSet::new();
        span.insert(0u32);
        for r in rows {
            let cur: Vec<u32> = span.iter().copied().collect();
            for s in cur {
                span.insert(s ^ r);
            }
        }
        span.len().trailing_zeros() as usize
    }

    fn arb_matrix() -> impl Strategy<Value = BitMatrix> {
        (1usize..=12, 1usize..=12).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(0u8..=1, c), r)
                .prop_map(|rows| BitMatrix::from_rows(&rows))
        })
    }

    proptest! {
        #[test]
        fn rank_plus_nullity(m in arb_matrix()) {
            prop_assert_eq!(m.rank() + m.kernel_basis().len(), m.cols());
        }

        #[test]
        fn rank_matches_span_oracle_and_transpose(m in arb_matrix()) {
            let r = m.rank();
            prop_assert_eq!(r, span_rank(&m));
            prop_assert_eq!(r, m.transpose().rank());
        }

        #[test]
        fn kernel_vectors_annihilate(m in arb_matrix()) {
            for v in m.kernel_basis() {
                prop_assert!(m.mul_vec(&v).is_zero());
            }
        }

        #[test]
        fn solve_solves(m in arb_matrix(), seed in proptest::collection::vec(0u8..=1, 1..=12)) {
            // Build a guaranteed-solvable rhs, then check the returned solution exactly.
            let mut x = BitVec::zeros(m.cols());
            for (i, &b) in seed.iter().take(m.cols()).enumerate() {
                x.set(i, b == 1);
            }
            let w = m.mul_vec(&x);
            let v = m.solve(&w).expect("rhs in image by construction");
            prop_assert_eq!(m.mul_vec(&v), w);
        }
    }
}
