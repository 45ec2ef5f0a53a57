//! Hardcoded small groups.

use crate::caps::Caps;
use crate::group::{cyclic, from_permutations, GroupError, GroupTable, Permutation};

/// Names accepted by [`named`], in canonical spelling.
pub const NAMES: &[&str] = &["trivial", "Z_n", "S_3", "S_4", "A_4", "Q_8", "D_8", "QD16", "SL23", "M16", "Dic3"];

/// `⟨x, y | x^m = 1, y^s = x^k, y x y^-1 = x^r⟩` on normal forms `x^i y^j`,
/// indexed `i * s + j`.
fn cyclic_extension(m: usize, s: usize, k: usize, r: usize) -> GroupTable {
    debug_assert_eq!((0..s).fold(1, |acc, _| acc * r % m), 1 % m);
    debug_assert_eq!(r * k % m, k % m);
    let mut twist = vec![1usize; s];
    for j in 1..s {
        twist[j] = twist[j - 1] * r % m;
    }
    GroupTable::from_fn(m * s, |a, b| {
        let (i, j) = (a / s, a % s);
        let (i2, j2) = (b / s, b % s);
        let mut x = i + twist[j] * i2;
        let mut y = j + j2;
        if y >= s {
            y -= s;
            x += k;
        }
        (x % m) * s + y
    })
}

fn perms(degree: usize, gens: &[&[&[usize]]]) -> Result<GroupTable, GroupError> {
    let gens = gens.iter().map(|cycles| Permutation::from_cycles(degree, cycles)).collect::<Result<Vec<_>, _>>()?;
    from_permutations(degree, &gens, &Caps::default())
}

/// SL(2,3) acting on the eight non-zero vectors of `F_3^2`.
fn sl23() -> Result<GroupTable, GroupError> {
    let vectors: Vec<(usize, usize)> =
        (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).filter(|&v| v != (0, 0)).collect();
    let act = |m: [[usize; 2]; 2]| {
        let images = vectors
            .iter()
            .map(|&(a, b)| {
                let w = ((m[0][0] * a + m[0][1] * b) % 3, (m[1][0] * a + m[1][1] * b) % 3);
                vectors.iter().position(|&v| v == w).expect("non-zero image")
            })
            .collect();
        Permutation::new(images)
    };
    let gens = [act([[1, 1], [0, 1]])?, act([[1, 0], [1, 1]])?];
    from_permutations(8, &gens, &Caps::default())
}

fn normalize(name: &str) -> String {
    name.chars().filter(|c| !matches!(c, '_' | '(' | ')' | ',' | ' ')).flat_map(char::to_lowercase).collect()
}

/// Looks up a group by name. `Z_n` accepts any positive `n` (`Z_12`, `Z12`, `C12`).
pub fn named(name: &str) -> Result<GroupTable, GroupError> {
    let key = normalize(name);
    let unknown = || GroupError::UnknownName(name.to_string());
    let (canonical, g) = match key.as_str() {
        "trivial" | "1" => ("trivial", cyclic(1)),
        "s3" => ("S_3", perms(3, &[&[&[0, 1]], &[&[0, 1, 2]]])?),
        "s4" => ("S_4", perms(4, &[&[&[0, 1]], &[&[0, 1, 2, 3]]])?),
        "a4" => ("A_4", perms(4, &[&[&[0, 1, 2]], &[&[1, 2, 3]]])?),
        "q8" => ("Q_8", cyclic_extension(4, 2, 2, 3)),
        "d8" => ("D_8", cyclic_extension(4, 2, 0, 3)),
        "qd16" => ("QD16", cyclic_extension(8, 2, 0, 3)),
        "m16" => ("M16", cyclic_extension(8, 2, 0, 5)),
        "dic3" => ("Dic3", cyclic_extension(3, 4, 0, 2)),
        "sl23" => ("SL23", sl23()?),
        _ => {
            let digits = key.strip_prefix('z').or_else(|| key.strip_prefix('c')).ok_or_else(unknown)?;
            let n: usize = digits.parse().map_err(|_| unknown())?;
            if n == 0 {
                return Err(unknown());
            }
            return Ok(cyclic(n));
        }
    };
    Ok(g.with_name(canonical))
}
