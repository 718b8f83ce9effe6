/// Pole-order data at infinity for level N on a curve with parameters (a, b).
///
/// Basis functions are the monomials x^i y^j with j < a, ordered by pole
/// order a*i + b*j. The rows of the stacked matrix run over residue classes
/// gamma = 0..a-1 (class of the pole order mod a), and within a class over
/// ascending powers of x.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupData {
    pub a: usize,
    pub b: usize,
    pub n: usize,
    pub genus: usize,
    /// Pole orders δ_1 < δ_2 < ... up to N (δ_1 = 0).
    pub delta: Vec<usize>,
    pub gaps: Vec<usize>,
    /// Number of pole orders ≤ N.
    pub dn: usize,
    /// ⌊N/a⌋ + 1.
    pub n0: usize,
    /// N_γ for γ = 0..a-1.
    pub n_gamma: Vec<usize>,
    /// S_γ = N_0 + ... + N_γ.
    pub s_gamma: Vec<usize>,
    /// y-exponent j(γ) of z_γ, with b*j(γ) ≡ γ mod a.
    pub j_gamma: Vec<usize>,
    /// δ(γ) = b*j(γ), the pole order of z_γ.
    pub delta_gamma: Vec<usize>,
    /// Exponents (i, j) of y_1, ..., y_{𝒟_N} in increasing pole order.
    pub basis: Vec<(usize, usize)>,
    /// Exponents (i, j) in stacked row order.
    pub rows: Vec<(usize, usize)>,
}

impl SemigroupData {
    pub fn new(a: usize, b: usize, n: usize) -> Self {
        let genus = (a - 1) * (b - 1) / 2;
        let j_gamma: Vec<usize> = (0..a).map(|g| (0..a).find(|j| (b * j) % a == g).unwrap()).collect();
        let delta_gamma: Vec<usize> = j_gamma.iter().map(|j| b * j).collect();
        let n_gamma: Vec<usize> = delta_gamma.iter().map(|&d| if d <= n { (n - d) / a + 1 } else { 0 }).collect();
        let s_gamma: Vec<usize> = n_gamma
            .iter()
            .scan(0, |acc, v| {
                *acc += v;
                Some(*acc)
            })
            .collect();
        let mut basis: Vec<(usize, usize)> = Vec::new();
        let mut rows = Vec::new();
        for gamma in 0..a {
            for i in 0..n_gamma[gamma] {
                rows.push((i, j_gamma[gamma]));
                basis.push((i, j_gamma[gamma]));
            }
        }
        basis.sort_by_key(|&(i, j)| a * i + b * j);
        let delta: Vec<usize> = basis.iter().map(|&(i, j)| a * i + b * j).collect();
        let conductor = 2 * genus;
        let gaps: Vec<usize> = (1..conductor.max(1))
            .filter(|&m| !j_gamma.iter().any(|&j| b * j <= m && (m - b * j).is_multiple_of(a)))
            .collect();
        SemigroupData {
            a,
            b,
            n,
            genus,
            dn: basis.len(),
            n0: n / a + 1,
            delta,
            gaps,
            n_gamma,
            s_gamma,
            j_gamma,
            delta_gamma,
            basis,
            rows,
        }
    }

    /// S_{γ} with S_{-1} = 0, indexed by γ + 1.
    pub fn s_before(&self, gamma: usize) -> usize {
        if gamma == 0 {
            0
        } else {
            self.s_gamma[gamma - 1]
        }
    }

    /// Class γ of a stacked row.
    pub fn row_class(&self, row: usize) -> usize {
        (0..self.a).find(|&g| row < self.s_gamma[g]).unwrap()
    }

    /// Index into `rows` of the stacked row for basis element n (0-based).
    pub fn stacked_index(&self, n: usize) -> usize {
        let target = self.basis[n];
        self.rows.iter().position(|r| *r == target).unwrap()
    }
}
