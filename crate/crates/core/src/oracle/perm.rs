/// Advances `v` to the next permutation in lexicographic order; `false` after the last.
pub fn next_permutation(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<u8>> {
    let mut cur: Vec<u8> = (0..n as u8).collect();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

/// All fixed-point-free involutions of `0..n` (`n` even), as image arrays.
pub fn perfect_matchings(n: usize) -> Vec<Vec<u8>> {
    fn go(img: &mut Vec<Option<u8>>, out: &mut Vec<Vec<u8>>) {
        let Some(first) = img.iter().position(Option::is_none) else {
            out.push(img.iter().map(|x| x.unwrap()).collect());
            return;
        };
        for j in first + 1..img.len() {
            if img[j].is_none() {
                img[first] = Some(j as u8);
                img[j] = Some(first as u8);
                go(img, out);
                img[first] = None;
                img[j] = None;
            }
        }
    }
    let mut out = Vec::new();
    if n % 2 == 0 {
        go(&mut vec![None; n], &mut out);
    }
    out
}

/// Lengths `j` (`1 ≤ j < n`) such that `p` maps `{0..j}` onto itself.
pub fn closed_prefix_mask(p: &[u8]) -> u64 {
    let mut mask = 0u64;
    let mut max_seen = 0usize;
    for (j, &x) in p.iter().enumerate().take(p.len().saturating_sub(1)) {
        max_seen = max_seen.max(x as usize);
        if max_seen == j {
            mask |= 1 << (j + 1);
        }
    }
    mask
}
