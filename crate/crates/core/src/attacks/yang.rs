use super::{cp_attack_norouzi, random_image, require_model, AttackModel, Oracle, RecoveredKey, Unpermuted};
use crate::ciphers::{suffix_sums, yang_unpermute};
use crate::dea::g_mul;
use crate::image::Image;
use crate::keysched::{ByteStream, CipherKind};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};

/// Probe value. For 41 the only key byte that cancels the probe at its own
/// position is 43, and that case is caught by a fallback pair.
pub const YANG_PROBE: u8 = 41;
const MAX_OPEN_TAIL: usize = 6;
const VERIFY_ROUNDS: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct YangPermutation {
    pub u: Vec<u32>,
    pub v: Vec<u32>,
    /// Differing cells between the probes at `L` and `L-1`.
    pub diff_last_two: usize,
    /// Differing cells between the probes at `L` and `L-2`.
    pub diff_last_three: usize,
    /// Assignments of the unresolved tail left for the consistency check.
    pub hypotheses: usize,
    pub fallbacks: usize,
    pub queries: u64,
}

type Cells = BTreeSet<usize>;

fn diff(a: &Image, b: &Image) -> Cells {
    a.pixels().iter().zip(b.pixels()).enumerate().filter(|(_, (x, y))| x != y).map(|(i, _)| i).collect()
}

struct Session<'a, O: ?Sized> {
    oracle: &'a mut O,
    height: usize,
    width: usize,
    seen: Vec<(Image, Image)>,
}

impl<O: Oracle + ?Sized> Session<'_, O> {
    fn ask(&mut self, plain: Image) -> Result<Image> {
        let c = self.oracle.encrypt(&plain)?;
        self.seen.push((plain, c.clone()));
        Ok(c)
    }

    /// Image with the given 1-based positions set, zero elsewhere.
    fn probe(&mut self, at: &[(usize, u8)]) -> Result<Image> {
        let mut img = Image::zeros(self.height, self.width)?;
        for &(l, v) in at {
            img.pixels_mut()[l - 1] = v;
        }
        self.ask(img)
    }

    /// Pair that differs at `m` whenever the single probe cancels there.
    fn fallback(&mut self, m: usize) -> Result<Cells> {
        let a = self.probe(&[(m, 1), (m + 1, 1)])?;
        let b = self.probe(&[(m + 1, 2)])?;
        Ok(diff(&a, &b))
    }
}

fn single(cells: &Cells, what: &str) -> Result<usize> {
    match cells.len() {
        1 => Ok(*cells.iter().next().expect("one element")),
        n => Err(Error::ModelViolation(format!("{what}: expected one new cell, found {n}"))),
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// True when some key byte explains every last-row position under `(u, v)`.
fn consistent(seen: &[(Image, Image)], u: &[u32], v: &[u32], height: usize, width: usize) -> bool {
    let len = height * width;
    let views: Vec<(Vec<u8>, Vec<u64>, Image)> =
        seen.iter().map(|(p, c)| (p.pixels().to_vec(), suffix_sums(p.pixels()), yang_unpermute(c, u, v))).collect();
    (len - width + 1..=len).all(|l| {
        (0..=255u8).any(|k| {
            views.iter().all(|(p, s, d)| {
                let prev = d.at(l - 1);
                d.at(l) == p[l - 1] ^ prev.wrapping_add(k) ^ g_mul(s[l - 1], k)
            })
        })
    })
}

/// Recovers Yang's column and row permutations with single-pixel probes
/// over the last row and last column.
pub fn cp_attack_yang_permutation<O: Oracle + ?Sized>(oracle: &mut O, seed: u64) -> Result<YangPermutation> {
    require_model(oracle, AttackModel::ChosenPlaintext)?;
    let start = oracle.query_count();
    let (h, w) = oracle.dims();
    let len = h * w;
    let first = len - w + 1;
    let mut sx = Session { oracle, height: h, width: w, seen: Vec::new() };
    let mut ct: HashMap<usize, Image> = HashMap::new();
    for m in first..=len {
        ct.insert(m, sx.probe(&[(m, YANG_PROBE)])?);
    }
    for i in 1..h {
        ct.insert(i * w, sx.probe(&[(i * w, YANG_PROBE)])?);
    }
    let diff_last_two = diff(&ct[&len], &ct[&(len - 1)]).len();
    let diff_last_three = diff(&ct[&len], &ct[&(len - 2)]).len();

    // last row: tail[m] is the cell set of positions m..=L
    let mut tail: HashMap<usize, Cells> = HashMap::new();
    let mut cell: HashMap<usize, usize> = HashMap::new();
    let mut fallbacks = 0;
    let mut rows = BTreeSet::new();
    for m in (first..len).rev() {
        let d = diff(&ct[&m], &ct[&(m + 1)]);
        rows.extend(d.iter().map(|c| c / w));
        let full = len - m + 1;
        if d.len() == full {
            tail.insert(m, d);
        } else if d.len() == 1 && full > 2 {
            cell.insert(m, single(&d, "isolated probe")?);
        } else if d.len() + 1 == full && full > 2 {
            if tail.get(&(m + 1)).is_some_and(|t| *t != d) {
                return Err(Error::ModelViolation(format!("tail from {} seen twice with different cells", m + 1)));
            }
            tail.insert(m + 1, d.clone());
            fallbacks += 1;
            let fb = sx.fallback(m)?;
            cell.insert(m, single(&fb.difference(&d).copied().collect(), "fallback pair")?);
        } else if !(full == 2 && d.len() == 1) {
            return Err(Error::ModelViolation(format!(
                "probes at {m} and {} differ in {} cells, expected {full}, {} or 1",
                m + 1,
                d.len(),
                full - 1
            )));
        }
    }
    if rows.len() != 1 {
        return Err(Error::ModelViolation(format!("last-row probes touched {} rows", rows.len())));
    }
    let r = *rows.iter().next().expect("one row");
    loop {
        let mut changed = false;
        for m in first..=len {
            let next = if m == len { Some(Cells::new()) } else { tail.get(&(m + 1)).cloned() };
            if !cell.contains_key(&m) {
                if let (Some(t), Some(n)) = (tail.get(&m), &next) {
                    cell.insert(m, single(&t.difference(n).copied().collect(), "tail difference")?);
                    changed = true;
                }
            }
            if let (None, Some(n), Some(&c)) = (tail.get(&m), &next, cell.get(&m)) {
                let mut t = n.clone();
                t.insert(c);
                tail.insert(m, t);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let open: Vec<usize> = (first..=len).filter(|m| !cell.contains_key(m)).collect();
    let used: Cells = cell.values().copied().collect();
    let free: Vec<usize> = (r * w..(r + 1) * w).filter(|c| !used.contains(c)).collect();
    if free.len() != open.len() || open.len() > MAX_OPEN_TAIL {
        return Err(Error::ModelViolation(format!("{} open positions for {} free cells", open.len(), free.len())));
    }

    // last column: row of each position i*W
    let mut v = vec![0u32; h];
    v[h - 1] = r as u32 + 1;
    let mut known: BTreeSet<usize> = BTreeSet::from([r]);
    for i in (1..h).rev() {
        let m = i * w;
        let d = diff(&ct[&m], &ct[&(m + w)]);
        let mut fresh: Cells = d.iter().map(|c| c / w).filter(|row| !known.contains(row)).collect();
        if fresh.is_empty() {
            fallbacks += 1;
            let fb = sx.fallback(m)?;
            fresh = fb.iter().map(|c| c / w).filter(|row| !known.contains(row)).collect();
        }
        let row = single(&fresh, "last-column probe")?;
        v[i - 1] = row as u32 + 1;
        known.insert(row);
    }

    let mut hypotheses = Vec::new();
    for assignment in permutations(&free) {
        let mut full = cell.clone();
        full.extend(open.iter().copied().zip(assignment));
        let fits = tail.iter().all(|(&m, t)| (m..=len).map(|l| full[&l]).collect::<Cells>() == *t);
        if fits {
            let u: Vec<u32> = (first..=len).map(|l| (full[&l] % w) as u32 + 1).collect();
            hypotheses.push(u);
        }
    }
    let count = hypotheses.len();
    let mut rng = ByteStream::new(seed);
    let mut round = 0;
    while hypotheses.len() > 1 && round < VERIFY_ROUNDS {
        round += 1;
        for _ in 0..3 {
            sx.ask(random_image(&mut rng, h, w))?;
        }
        hypotheses.retain(|u| consistent(&sx.seen, u, &v, h, w));
    }
    if hypotheses.len() != 1 {
        return Err(Error::ModelViolation(format!("{} permutation hypotheses survive", hypotheses.len())));
    }
    let u = hypotheses.pop().expect("exactly one");
    Ok(YangPermutation {
        u,
        v,
        diff_last_two,
        diff_last_three,
        hypotheses: count,
        fallbacks,
        queries: sx.oracle.query_count() - start,
    })
}

/// Permutation recovery, then the Norouzi chosen-plaintext attack on the un-permuted oracle.
pub fn cp_attack_yang_full<O: Oracle + ?Sized>(oracle: &mut O, seed: u64) -> Result<RecoveredKey> {
    Ok(cp_attack_yang_detailed(oracle, seed)?.0)
}

/// [`cp_attack_yang_full`] that also returns the permutation-phase report.
pub fn cp_attack_yang_detailed<O: Oracle + ?Sized>(oracle: &mut O, seed: u64) -> Result<(RecoveredKey, YangPermutation)> {
    let start = oracle.query_count();
    let perm = cp_attack_yang_permutation(oracle, seed)?;
    let mut inner = Unpermuted::new(&mut *oracle, perm.u.clone(), perm.v.clone());
    let mut key = cp_attack_norouzi(&mut inner, seed.wrapping_add(1))?;
    key.cipher = CipherKind::Yang;
    key.u = Some(perm.u.clone());
    key.v = Some(perm.v.clone());
    key.queries = oracle.query_count() - start;
    Ok((key, perm))
}
