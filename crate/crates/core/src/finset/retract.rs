use serde::Serialize;

use super::{all_maps, SetMap};

/// Maps exhibiting `f : A → B` as a retract of `g : X → Y` in the arrow category:
/// `r∘i = id_A`, `s∘j = id_B`, `g∘i = j∘f` and `f∘r = s∘g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Retraction {
    pub i: SetMap,
    pub r: SetMap,
    pub j: SetMap,
    pub s: SetMap,
}

impl Retraction {
    pub fn is_valid(&self, f: &SetMap, g: &SetMap) -> bool {
        let check = || -> Option<bool> {
            Some(
                self.i.then(&self.r).ok()? == SetMap::identity(f.domain())
                    && self.j.then(&self.s).ok()? == SetMap::identity(f.codomain())
                    && self.i.then(g).ok()? == f.then(&self.j).ok()?
                    && self.r.then(f).ok()? == g.then(&self.s).ok()?,
            )
        };
        check().unwrap_or(false)
    }
}

pub fn is_retract(f: &SetMap, g: &SetMap) -> bool {
    retraction_witness(f, g).is_some()
}

/// Searches every injective `i : A → X` and `j : B → Y` with `g∘i = j∘f`. Once those are fixed
/// the constraints on `s` and `r` decouple element by element, so each is chosen pointwise.
pub fn retraction_witness(f: &SetMap, g: &SetMap) -> Option<Retraction> {
    let (a, b) = (f.domain(), f.codomain());
    let (x, y) = (g.domain(), g.codomain());
    let f_image = f.image();

    for i in all_maps(a, x).filter(SetMap::is_injective) {
        let gi = i.then(g).ok()?;
        for j in all_maps(b, y).filter(SetMap::is_injective) {
            if f.then(&j).ok()? != gi {
                continue;
            }
            if let Some(w) = complete(f, g, &i, &j, &f_image) {
                debug_assert!(w.is_valid(f, g));
                return Some(w);
            }
        }
    }
    None
}

fn complete(f: &SetMap, g: &SetMap, i: &SetMap, j: &SetMap, f_image: &[usize]) -> Option<Retraction> {
    let (a, b) = (f.domain(), f.codomain());
    let (x, y) = (g.domain(), g.codomain());

    let mut i_inv = vec![None; x.len()];
    for (k, &xi) in i.table().iter().enumerate() {
        i_inv[xi] = Some(k);
    }
    let mut j_inv = vec![None; y.len()];
    for (k, &yj) in j.table().iter().enumerate() {
        j_inv[yj] = Some(k);
    }
    // y values that must land in the image of f, because some x outside im(i) maps onto them.
    let mut needs_image = vec![false; y.len()];
    for xi in 0..x.len() {
        if i_inv[xi].is_none() {
            needs_image[g.at(xi)] = true;
        }
    }

    let mut s_table = Vec::with_capacity(y.len());
    for yi in 0..y.len() {
        let value = match j_inv[yi] {
            Some(bk) => {
                if needs_image[yi] && !f_image.contains(&bk) {
                    return None;
                }
                bk
            }
            None if needs_image[yi] => *f_image.first()?,
            None => {
                if b.is_empty() {
                    return None;
                }
                0
            }
        };
        s_table.push(value);
    }
    let s = SetMap::from_table(y.clone(), b.clone(), s_table).ok()?;

    let mut r_table = Vec::with_capacity(x.len());
    for (xi, inv) in i_inv.iter().enumerate() {
        let value = match *inv {
            Some(ak) => ak,
            None => {
                let target = s.at(g.at(xi));
                (0..a.len()).find(|&ak| f.at(ak) == target)?
            }
        };
        r_table.push(value);
    }
    let r = SetMap::from_table(x.clone(), a.clone(), r_table).ok()?;

    Some(Retraction {
        i: i.clone(),
        r,
        j: j.clone(),
        s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::{all_maps_up_to, named, ClassTag, FinSet};

    /// Brute force over all four legs, for cross-checking on tiny inputs.
    fn retract_oracle(f: &SetMap, g: &SetMap) -> bool {
        let (a, b) = (f.domain(), f.codomain());
        let (x, y) = (g.domain(), g.codomain());
        for i in all_maps(a, x) {
            for r in all_maps(x, a) {
                for j in all_maps(b, y) {
                    for s in all_maps(y, b) {
                        let w = Retraction {
                            i: i.clone(),
                            r: r.clone(),
                            j: j.clone(),
                            s,
                        };
                        if w.is_valid(f, g) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    #[test]
    fn reflexive() {
        for f in all_maps_up_to(2) {
            assert!(is_retract(&f, &f), "{f}");
        }
    }

    #[test]
    fn r_is_a_retract_of_every_non_injective_map() {
        let r = named::r();
        for f in all_maps_up_to(3).filter(|f| !f.is_injective()) {
            let w = retraction_witness(&r, &f).expect("R should retract");
            assert!(w.is_valid(&r, &f));
        }
    }

    #[test]
    fn c_is_not_a_retract_of_c_plus() {
        assert!(!is_retract(&named::c(), &named::c_plus()));
        assert!(!retract_oracle(&named::c(), &named::c_plus()));
        // but C+ is a retract of itself and of C+ ⊔ id
        assert!(is_retract(&named::c_plus(), &named::c_plus()));
    }

    #[test]
    fn agrees_with_brute_force() {
        let maps: Vec<SetMap> = all_maps_up_to(2).collect();
        for f in &maps {
            for g in &maps {
                assert_eq!(is_retract(f, g), retract_oracle(f, g), "{f} vs {g}");
            }
        }
    }

    #[test]
    fn tags_are_retract_closed() {
        let maps: Vec<SetMap> = all_maps_up_to(2)
            .chain(std::iter::once(SetMap::identity(&FinSet::range(3))))
            .collect();
        for f in &maps {
            for g in &maps {
                if !is_retract(f, g) {
                    continue;
                }
                for tag in ClassTag::ALL_TAGS {
                    if tag.holds(g) {
                        assert!(tag.holds(f), "{tag}: {f} retract of {g}");
                    }
                }
            }
        }
    }
}
