//! SA-IS suffix sorting over integer alphabets.

const EMPTY: u32 = u32::MAX;

/// Suffix array of `s`, which must end with a unique smallest symbol `0`.
/// All symbols must be `< alphabet`.
pub(crate) fn suffix_array(s: &[u32], alphabet: usize) -> Vec<u32> {
    debug_assert!(!s.is_empty() && *s.last().unwrap() == 0);
    debug_assert!(s[..s.len() - 1]
        .iter()
        .all(|&c| c > 0 && (c as usize) < alphabet));
    let mut sa = vec![EMPTY; s.len()];
    sais(s, &mut sa, alphabet);
    sa
}

fn heads(counts: &[u32]) -> Vec<u32> {
    let mut sum = 0;
    counts
        .iter()
        .map(|&c| {
            let h = sum;
            sum += c;
            h
        })
        .collect()
}

fn tails(counts: &[u32]) -> Vec<u32> {
    let mut sum = 0;
    counts
        .iter()
        .map(|&c| {
            sum += c;
            sum
        })
        .collect()
}

#[inline]
fn is_lms(stype: &[bool], i: usize) -> bool {
    i > 0 && stype[i] && !stype[i - 1]
}

fn induce(s: &[u32], sa: &mut [u32], stype: &[bool], counts: &[u32]) {
    let n = s.len();
    let mut h = heads(counts);
    for i in 0..n {
        let j = sa[i];
        if j != EMPTY && j > 0 && !stype[j as usize - 1] {
            let c = s[j as usize - 1] as usize;
            sa[h[c] as usize] = j - 1;
            h[c] += 1;
        }
    }
    let mut t = tails(counts);
    for i in (0..n).rev() {
        let j = sa[i];
        if j != EMPTY && j > 0 && stype[j as usize - 1] {
            let c = s[j as usize - 1] as usize;
            t[c] -= 1;
            sa[t[c] as usize] = j - 1;
        }
    }
}

fn lms_substrings_equal(s: &[u32], stype: &[bool], a: usize, b: usize) -> bool {
    let n = s.len();
    let mut d = 0;
    loop {
        if a + d >= n || b + d >= n {
            return false;
        }
        if s[a + d] != s[b + d] || stype[a + d] != stype[b + d] {
            return false;
        }
        if d > 0 {
            let (la, lb) = (is_lms(stype, a + d), is_lms(stype, b + d));
            if la || lb {
                return la && lb;
            }
        }
        d += 1;
    }
}

fn sais(s: &[u32], sa: &mut [u32], alphabet: usize) {
    let n = s.len();
    if n == 1 {
        sa[0] = 0;
        return;
    }
    let mut stype = vec![false; n];
    stype[n - 1] = true;
    for i in (0..n - 1).rev() {
        stype[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && stype[i + 1]);
    }
    let mut counts = vec![0u32; alphabet];
    for &c in s {
        counts[c as usize] += 1;
    }

    // Sort LMS substrings.
    sa.fill(EMPTY);
    let mut t = tails(&counts);
    for (i, &c) in s.iter().enumerate().skip(1) {
        if is_lms(&stype, i) {
            let c = c as usize;
            t[c] -= 1;
            sa[t[c] as usize] = i as u32;
        }
    }
    induce(s, sa, &stype, &counts);

    // Compact them and name them.
    let mut n1 = 0;
    for i in 0..n {
        let j = sa[i];
        if is_lms(&stype, j as usize) {
            sa[n1] = j;
            n1 += 1;
        }
    }
    sa[n1..].fill(EMPTY);
    let mut names = 0u32;
    let mut prev: Option<usize> = None;
    for i in 0..n1 {
        let pos = sa[i] as usize;
        if prev.is_none_or(|p| !lms_substrings_equal(s, &stype, p, pos)) {
            names += 1;
            prev = Some(pos);
        }
        sa[n1 + pos / 2] = names - 1;
    }
    let reduced: Vec<u32> = sa[n1..].iter().copied().filter(|&v| v != EMPTY).collect();
    debug_assert_eq!(reduced.len(), n1);

    // Order of LMS suffixes, recursively if names collide.
    let mut order = vec![EMPTY; n1];
    if (names as usize) < n1 {
        sais(&reduced, &mut order, names as usize);
    } else {
        for (i, &r) in reduced.iter().enumerate() {
            order[r as usize] = i as u32;
        }
    }
    let lms_positions: Vec<u32> = (1..n)
        .filter(|&i| is_lms(&stype, i))
        .map(|i| i as u32)
        .collect();
    for o in order.iter_mut() {
        *o = lms_positions[*o as usize];
    }

    sa.fill(EMPTY);
    let mut t = tails(&counts);
    for &j in order.iter().rev() {
        let c = s[j as usize] as usize;
        t[c] -= 1;
        sa[t[c] as usize] = j;
    }
    induce(s, sa, &stype, &counts);
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive(s: &[u32]) -> Vec<u32> {
        let mut sa: Vec<u32> = (0..s.len() as u32).collect();
        sa.sort_by(|&a, &b| s[a as usize..].cmp(&s[b as usize..]));
        sa
    }

    #[test]
    fn small_cases() {
        assert_eq!(suffix_array(&[0], 1), vec![0]);
        assert_eq!(suffix_array(&[1, 0], 2), vec![1, 0]);
        let banana: Vec<u32> = b"banana"
            .iter()
            .map(|&c| (c - b'a' + 1) as u32)
            .chain([0])
            .collect();
        assert_eq!(suffix_array(&banana, 27), naive(&banana));
    }

    proptest! {
        #[test]
        fn matches_naive_sort(body in proptest::collection::vec(1u32..5, 0..400)) {
            let mut s = body;
            s.push(0);
            prop_assert_eq!(suffix_array(&s, 5), naive(&s));
        }

        #[test]
        fn repetitive_inputs(unit in proptest::collection::vec(1u32..3, 1..6), reps in 1usize..80) {
            let mut s: Vec<u32> = unit.iter().copied().cycle().take(unit.len() * reps).collect();
            s.push(0);
            prop_assert_eq!(suffix_array(&s, 3), naive(&s));
        }
    }
}
