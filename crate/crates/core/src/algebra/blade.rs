use std::fmt;

use super::Kind;

/// Bit-set of basis indices: bit `i` set means basis element `i` is present.
///
/// Blades are always taken in ascending index order, `e_J = e_{j1} ^ ... ^ e_{jk}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BladeIndex(pub u32);

impl BladeIndex {
    pub const SCALAR: BladeIndex = BladeIndex(0);

    pub fn basis(i: usize) -> Self {
        BladeIndex(1 << i)
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        BladeIndex(indices.iter().fold(0, |m, &i| m | (1 << i)))
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn is_subset_of(self, other: BladeIndex) -> bool {
        self.0 & !other.0 == 0
    }

    /// Ascending list of basis indices.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let m = self.0;
        (0..32).filter(move |i| m & (1 << i) != 0)
    }

    /// `e` + one-based digits for multivectors, `eps` + digits for multiforms, `1` for scalars.
    pub fn name<K: Kind>(self) -> String {
        if self.0 == 0 {
            return "1".to_string();
        }
        let digits: String = self
            .indices()
            .map(|i| char::from_digit(i as u32 + 1, 10).unwrap_or('?'))
            .collect();
        format!("{}{}", K::PREFIX, digits)
    }
}

impl fmt::Display for BladeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#b}", self.0)
    }
}

/// Sign of `e_a ^ e_b` relative to the ascending blade `e_{a|b}`.
///
/// Counts the transpositions needed to merge the two ascending index lists.
/// Only meaningful when `a & b == 0`.
pub fn reorder_sign(a: u32, b: u32) -> f64 {
    let mut a = a >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Reversion sign `(-1)^{k(k-1)/2}`.
pub fn reversion_sign(grade: usize) -> f64 {
    if (grade * grade.saturating_sub(1) / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// All blades of dimension `dim` ordered by grade, then by mask.
pub fn blades_by_grade(dim: usize) -> Vec<BladeIndex> {
    let mut v: Vec<BladeIndex> = (0..1u32 << dim).map(BladeIndex).collect();
    v.sort_by_key(|b| (b.grade(), b.0));
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Form, Vector};

    #[test]
    fn names() {
        assert_eq!(BladeIndex(0).name::<Vector>(), "1");
        assert_eq!(BladeIndex(0b011).name::<Vector>(), "e12");
        assert_eq!(BladeIndex(0b101).name::<Form>(), "eps13");
    }

    #[test]
    fn reorder_signs() {
        // e1 ^ e2 = e12
        assert_eq!(reorder_sign(0b01, 0b10), 1.0);
        // e2 ^ e1 = -e12
        assert_eq!(reorder_sign(0b10, 0b01), -1.0);
        // e23 ^ e1 = e123 (two swaps)
        assert_eq!(reorder_sign(0b110, 0b001), 1.0);
        // e3 ^ e12 = e123 (two swaps), e2 ^ e13 = -e123
        assert_eq!(reorder_sign(0b100, 0b011), 1.0);
        assert_eq!(reorder_sign(0b010, 0b101), -1.0);
    }

    #[test]
    fn reversion_signs() {
        let signs: Vec<f64> = (0..6).map(reversion_sign).collect();
        assert_eq!(signs, vec![1.0, 1.0, -1.0, -1.0, 1.0, 1.0]);
    }

    #[test]
    fn grade_ordering() {
        let b = blades_by_grade(3);
        let masks: Vec<u32> = b.iter().map(|b| b.0).collect();
        assert_eq!(masks, vec![0, 1, 2, 4, 3, 5, 6, 7]);
    }
}
