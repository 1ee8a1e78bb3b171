//! ground-set subsets as bitmasks. elements are 1-based everywhere a human
//! sees them (JSON, display, errors); bit i-1 encodes element i.

use std::cmp::Ordering;

pub type Mask = u32;

/// hard cap on ground-set size; masks and subset enumeration assume it.
pub const MAX_GROUND: usize = 16;

pub fn bit(elem: usize) -> Mask {
    debug_assert!((1..=MAX_GROUND).contains(&elem));
    1 << (elem - 1)
}

pub fn full_mask(n: usize) -> Mask {
    debug_assert!(n <= MAX_GROUND);
    if n == 0 {
        0
    } else {
        (1u32 << n) - 1
    }
}

pub fn contains(mask: Mask, elem: usize) -> bool {
    mask & bit(elem) != 0
}

pub fn is_subset(a: Mask, b: Mask) -> bool {
    a & !b == 0
}

pub fn card(mask: Mask) -> usize {
    mask.count_ones() as usize
}

/// 1-based elements in ascending order.
pub fn elems(mask: Mask) -> Vec<usize> {
    (1..=MAX_GROUND).filter(|&i| contains(mask, i)).collect()
}

pub fn mask_of(elements: &[usize]) -> Mask {
    elements.iter().fold(0, |m, &i| m | bit(i))
}

/// compares as sorted element lists, e.g. {1,4} < {2,3}. numeric mask order
/// would get that pair backwards.
pub fn lex_cmp(a: Mask, b: Mask) -> Ordering {
    elems(a).cmp(&elems(b))
}

/// all submasks of `mask`, including 0 and `mask` itself.
pub fn submasks(mask: Mask) -> impl Iterator<Item = Mask> {
    let mut cur: Option<Mask> = Some(mask);
    std::iter::from_fn(move || {
        let s = cur?;
        cur = if s == 0 { None } else { Some((s - 1) & mask) };
        Some(s)
    })
}

pub fn fmt_mask(mask: Mask) -> String {
    let inner = elems(mask)
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",");
    format!("{{{inner}}}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let m = mask_of(&[2, 5, 1]);
        assert_eq!(elems(m), vec![1, 2, 5]);
        assert_eq!(card(m), 3);
        assert_eq!(fmt_mask(m), "{1,2,5}");
    }

    #[test]
    fn submask_count() {
        let m = mask_of(&[1, 3, 4]);
        let subs: Vec<_> = submasks(m).collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.contains(&0));
        assert!(subs.contains(&m));
    }

    #[test]
    fn lex_order_is_listwise() {
        assert_eq!(lex_cmp(mask_of(&[1, 4]), mask_of(&[2, 3])), Ordering::Less);
        assert_eq!(lex_cmp(mask_of(&[2, 3]), mask_of(&[2, 3])), Ordering::Equal);
    }
}
