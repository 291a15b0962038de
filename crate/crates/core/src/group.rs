//! Finite groups given by multiplication tables, with conjugacy classes,
//! centralizers and complex character tables.

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// A finite group on elements `0..n` with `0` the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    names: Vec<String>,
}

/// On-disk group format: `{ "order": n, "mul": [[...]] }`, identity `0`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub order: usize,
    pub mul: Vec<Vec<usize>>,
}

impl GroupTable {
    /// Builds a group from its multiplication table, checking closure,
    /// unit, inverses and associativity.
    pub fn from_mul(mul: Vec<Vec<usize>>) -> Result<Self> {
        let n = mul.len();
        if n == 0 {
            return Err(Error::input("group table is empty"));
        }
        for (a, row) in mul.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(format!(
                    "row {a} of the multiplication table has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::input(format!("element {x} in row {a} is out of range")));
            }
        }
        for a in 0..n {
            if mul[0][a] != a || mul[a][0] != a {
                return Err(Error::input(format!("0 is not a two-sided identity at element {a}")));
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            let right: Vec<usize> = (0..n).filter(|&b| mul[a][b] == 0).collect();
            let left: Vec<usize> = (0..n).filter(|&b| mul[b][a] == 0).collect();
            match (right.as_slice(), left.as_slice()) {
                ([b], [c]) if b == c => inv[a] = *b,
                _ => return Err(Error::input(format!("element {a} has no unique inverse"))),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::input(format!(
                            "multiplication is not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let names = (0..n).map(|a| a.to_string()).collect();
        Ok(GroupTable { mul, inv, names })
    }

    pub fn from_file(file: GroupFile) -> Result<Self> {
        if file.order != file.mul.len() {
            return Err(Error::input(format!(
                "order {} does not match table size {}",
                file.order,
                file.mul.len()
            )));
        }
        Self::from_mul(file.mul)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(serde_json::from_str(text)?)
    }

    pub fn to_file(&self) -> GroupFile {
        GroupFile {
            order: self.order(),
            mul: self.mul.clone(),
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.order());
        self.names = names;
        self
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group needs n >= 1");
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_mul(mul).expect("cyclic table is a group")
    }

    /// Direct product; element `(a, b)` is stored at `a * |H| + b`.
    pub fn product(g: &GroupTable, h: &GroupTable) -> Self {
        let (n, m) = (g.order(), h.order());
        let mul = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| g.mul(x / m, y / m) * m + h.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        let names = (0..n * m)
            .map(|x| format!("({},{})", g.name(x / m), h.name(x % m)))
            .collect();
        Self::from_mul(mul)
            .expect("product of groups is a group")
            .with_names(names)
    }

    /// Symmetric group on three letters; elements are permutations listed in
    /// lexicographic order, product `a * b` applies `b` first.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let mul = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| index([a[b[0]], a[b[1]], a[b[2]]]))
                    .collect()
            })
            .collect();
        let names = perms.iter().map(|p| format!("[{}{}{}]", p[0], p[1], p[2])).collect();
        Self::from_mul(mul).expect("S3 is a group").with_names(names)
    }

    /// Built-in groups by name: `z<n>` (1 <= n <= 12), `z2xz2`, `s3`.
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "z2xz2" | "klein" => Ok(Self::product(&Self::cyclic(2), &Self::cyclic(2))),
            "s3" => Ok(Self::symmetric3()),
            _ => {
                let n = name
                    .strip_prefix('z')
                    .and_then(|s| s.parse::<usize>().ok())
                    .filter(|n| (1..=12).contains(n))
                    .ok_or_else(|| Error::input(format!("unknown built-in group '{name}'")))?;
                Ok(Self::cyclic(n))
            }
        }
    }

    pub fn builtin_names() -> Vec<String> {
        let mut names: Vec<String> = (1..=12).map(|n| format!("z{n}")).collect();
        names.push("z2xz2".into());
        names.push("s3".into());
        names
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// An element generating the whole group, if the group is cyclic.
    pub fn cyclic_generator(&self) -> Option<usize> {
        (0..self.order()).find(|&a| self.element_order(a) == self.order())
    }

    /// Conjugacy classes, each sorted, ordered by smallest element (the
    /// identity class comes first).
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if seen[x] {
                continue;
            }
            let mut class: Vec<usize> = (0..n).map(|g| self.conjugate(g, x)).collect();
            class.sort_unstable();
            class.dedup();
            for &y in &class {
                seen[y] = true;
            }
            classes.push(class);
        }
        classes
    }

    pub fn centralizer(&self, x: usize) -> Vec<usize> {
        (0..self.order())
            .filter(|&g| self.mul(g, x) == self.mul(x, g))
            .collect()
    }

    /// The subgroup on `elements` (which must contain 0 and be closed),
    /// relabeled so that `elements[i]` becomes `i`.
    pub fn subgroup(&self, elements: &[usize]) -> Result<GroupTable> {
        let pos = |x: usize| elements.iter().position(|&e| e == x);
        if elements.first() != Some(&0) {
            return Err(Error::input("subgroup element list must start with the identity"));
        }
        let mut mul = Vec::with_capacity(elements.len());
        for &a in elements {
            let mut row = Vec::with_capacity(elements.len());
            for &b in elements {
                row.push(pos(self.mul(a, b)).ok_or_else(|| {
                    Error::input(format!("subset is not closed under {a} * {b}"))
                })?);
            }
            mul.push(row);
        }
        let names = elements.iter().map(|&e| self.name(e).to_string()).collect();
        Ok(GroupTable::from_mul(mul)?.with_names(names))
    }

    pub fn character_table(&self) -> Result<CharacterTable> {
        CharacterTable::compute(self)
    }
}

/// Irreducible complex characters of a finite group, evaluated on classes.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub classes: Vec<Vec<usize>>,
    /// Class index of every group element.
    pub class_of: Vec<usize>,
    /// `chars[a][c]` is the value of character `a` on class `c`. The
    /// trivial character is first; the rest are sorted by degree.
    pub chars: Vec<Vec<C64>>,
}

const CHARACTER_ATTEMPTS: usize = 16;

impl CharacterTable {
    pub fn degree(&self, chi: usize) -> usize {
        self.chars[chi][0].re.round() as usize
    }

    pub fn value(&self, chi: usize, element: usize) -> C64 {
        self.chars[chi][self.class_of[element]]
    }

    /// Burnside's method: the class sums act on the centre of the group
    /// algebra by commuting normal matrices whose joint eigenvectors are the
    /// central idempotents. A random Hermitian combination separates them.
    fn compute(group: &GroupTable) -> Result<CharacterTable> {
        let n = group.order();
        let classes = group.conjugacy_classes();
        let r = classes.len();
        let mut class_of = vec![0; n];
        for (c, class) in classes.iter().enumerate() {
            for &x in class {
                class_of[x] = c;
            }
        }
        let sizes: Vec<f64> = classes.iter().map(|c| c.len() as f64).collect();

        // a[j][i][k] = #{(x, y) in K_j x K_i : x y = rep(K_k)}
        let mut structure = vec![vec![vec![0usize; r]; r]; r];
        for (j, kj) in classes.iter().enumerate() {
            for &x in kj {
                for (i, ki) in classes.iter().enumerate() {
                    for &y in ki {
                        let z = group.mul(x, y);
                        let k = class_of[z];
                        if z == classes[k][0] {
                            structure[j][i][k] += 1;
                        }
                    }
                }
            }
        }
        // Class-sum multiplication in the orthonormal basis C_k / sqrt|K_k|.
        let ops: Vec<DMatrix<C64>> = (0..r)
            .map(|j| {
                DMatrix::from_fn(r, r, |k, i| {
                    C64::new(structure[j][i][k] as f64 * (sizes[k] / sizes[i]).sqrt(), 0.0)
                })
            })
            .collect();

        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c4a2);
        let mut last_reason = String::new();
        for _ in 0..CHARACTER_ATTEMPTS {
            let mut h = DMatrix::<C64>::zeros(r, r);
            for op in &ops {
                let t: f64 = rng.random_range(-1.0..1.0);
                let s: f64 = rng.random_range(-1.0..1.0);
                let adj = op.adjoint();
                h += (op + &adj) * C64::new(t, 0.0) + (op - &adj) * C64::new(0.0, s);
            }
            let eig = SymmetricEigen::new(h);
            let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
            values.sort_by(f64::total_cmp);
            if values.windows(2).any(|w| w[1] - w[0] < 1e-6) {
                last_reason = "random class-sum combination has a repeated eigenvalue".into();
                continue;
            }
            match Self::from_eigenvectors(n, &classes, &sizes, &ops, &eig.eigenvectors) {
                Ok(chars) => {
                    return Ok(CharacterTable {
                        classes,
                        class_of,
                        chars,
                    })
                }
                Err(reason) => last_reason = reason,
            }
        }
        Err(Error::CharacterTable {
            attempts: CHARACTER_ATTEMPTS,
            reason: last_reason,
        })
    }

    fn from_eigenvectors(
        n: usize,
        classes: &[Vec<usize>],
        sizes: &[f64],
        ops: &[DMatrix<C64>],
        vectors: &DMatrix<C64>,
    ) -> std::result::Result<Vec<Vec<C64>>, String> {
        let r = classes.len();
        let mut chars = Vec::with_capacity(r);
        for col in 0..r {
            let v = vectors.column(col);
            // central character: omega_j = |K_j| chi(g_j) / chi(1)
            let omega: Vec<C64> = ops.iter().map(|op| v.dotc(&(op * v))).collect();
            let norm: f64 = omega
                .iter()
                .zip(sizes)
                .map(|(w, s)| w.norm_sqr() / s)
                .sum();
            let degree = (n as f64 / norm).sqrt();
            let rounded = degree.round();
            if (degree - rounded).abs() > 1e-6 || rounded < 1.0 {
                return Err(format!("non-integral character degree {degree}"));
            }
            let chi: Vec<C64> = omega
                .iter()
                .zip(sizes)
                .map(|(w, s)| snap(w * (rounded / s)))
                .collect();
            chars.push(chi);
        }
        for a in 0..r {
            for b in 0..r {
                let ip: C64 = (0..r)
                    .map(|c| chars[a][c] * chars[b][c].conj() * sizes[c])
                    .sum::<C64>()
                    / n as f64;
                let expected = if a == b { 1.0 } else { 0.0 };
                if (ip - C64::new(expected, 0.0)).norm() > 1e-8 {
                    return Err(format!("orthogonality fails for characters {a}, {b}"));
                }
            }
        }
        chars.sort_by(|x, y| {
            let key = |c: &Vec<C64>| -> Vec<(i64, i64)> {
                c.iter()
                    .map(|z| ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64))
                    .collect()
            };
            let trivial = |c: &Vec<C64>| c.iter().all(|z| (z - C64::new(1.0, 0.0)).norm() < 1e-9);
            trivial(y)
                .cmp(&trivial(x))
                .then((x[0].re.round() as i64).cmp(&(y[0].re.round() as i64)))
                .then(key(y).cmp(&key(x)))
        });
        Ok(chars)
    }
}

/// Removes floating-point dust from values that are integral or zero in
/// either component.
fn snap(z: C64) -> C64 {
    let fix = |t: f64| if (t - t.round()).abs() < 1e-12 { t.round() } else { t };
    C64::new(fix(z.re), fix(z.im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_group_tables() {
        assert!(GroupTable::from_mul(vec![]).is_err());
        assert!(GroupTable::from_mul(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(GroupTable::from_mul(vec![vec![0, 1], vec![1, 2]]).is_err());
        // unit fails
        assert!(GroupTable::from_mul(vec![vec![1, 0], vec![0, 1]]).is_err());
    }

    #[test]
    fn s3_classes_and_centralizers() {
        let g = GroupTable::symmetric3();
        assert!(!g.is_abelian());
        let sizes: Vec<usize> = g.conjugacy_classes().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
        assert_eq!(g.centralizer(0).len(), 6);
        assert_eq!(g.centralizer(1).len(), 2);
        assert_eq!(g.centralizer(3).len(), 3);
    }

    #[test]
    fn character_tables_of_builtins() {
        for name in GroupTable::builtin_names() {
            let g = GroupTable::builtin(&name).unwrap();
            let t = g.character_table().unwrap();
            assert_eq!(t.chars.len(), t.classes.len(), "{name}");
            let sum: usize = (0..t.chars.len()).map(|a| t.degree(a).pow(2)).sum();
            assert_eq!(sum, g.order(), "{name}");
            assert!(t.chars[0].iter().all(|z| (z.re - 1.0).abs() < 1e-12 && z.im == 0.0));
        }
    }

    #[test]
    fn s3_character_degrees() {
        let t = GroupTable::symmetric3().character_table().unwrap();
        let degrees: Vec<usize> = (0..3).map(|a| t.degree(a)).collect();
        assert_eq!(degrees, vec![1, 1, 2]);
        // sign character is -1 on transpositions, standard character is 0 there
        assert!((t.chars[1][1].re + 1.0).abs() < 1e-12);
        assert!(t.chars[2][1].norm() < 1e-12);
        assert!((t.chars[2][2].re + 1.0).abs() < 1e-12);
    }

    #[test]
    fn builtin_lookup() {
        assert_eq!(GroupTable::builtin("z5").unwrap().order(), 5);
        assert_eq!(GroupTable::builtin("z2xz2").unwrap().cyclic_generator(), None);
        assert!(GroupTable::builtin("z13").is_err());
        assert!(GroupTable::builtin("q8").is_err());
    }

    #[test]
    fn group_file_round_trip() {
        let g = GroupTable::symmetric3();
        let text = serde_json::to_string(&g.to_file()).unwrap();
        let back = GroupTable::from_json(&text).unwrap();
        assert_eq!(back.table(), g.table());
        assert!(GroupTable::from_json(r#"{"order": 3, "mul": [[0,1],[1,0]]}"#).is_err());
    }
}
