use crate::error::{Error, Result};
use crate::fincat::standard::DeltaSite;
use crate::presheaf::{power, NatTrans, Presheaf, Product};

/// `y[n]` as a retract of `(y[1])ⁿ`.
#[derive(Debug, Clone)]
pub struct Retraction {
    pub simplex: Presheaf,
    pub power: Product,
    pub a: NatTrans,
    pub b: NatTrans,
}

impl Retraction {
    /// `b∘a = id`, element-wise in every degree.
    pub fn is_retraction(&self) -> bool {
        self.b.after(&self.a) == NatTrans::identity(&self.simplex)
    }
}

/// `a_j(i) = [i ≥ j]` for `j = 1..n`, and `b(h₁, …, hₙ)(i) = Σ h_j(i)`.
pub fn simplex_retraction(site: &DeltaSite, n: usize) -> Result<Retraction> {
    if n == 0 || n > site.n {
        return Err(Error::CapExceeded {
            what: "retraction dimension",
            value: n,
            cap: site.n,
        });
    }
    let cat = &site.cat;
    let simplex = Presheaf::yoneda(cat, n);
    let interval = Presheaf::yoneda(cat, 1);
    let pw = power(&interval, n);
    let a = NatTrans::from_fn(&simplex, |m, f| {
        let f = site.values(cat.hom(m, n)[f]);
        let coords: Vec<usize> = (1..=n)
            .map(|j| {
                let aj: Vec<usize> = f.iter().map(|&i| usize::from(i >= j)).collect();
                cat.hom_position(site.morphism(m, 1, &aj))
            })
            .collect();
        pw.encode(m, &coords)
    });
    let b = NatTrans::from_fn(&pw.obj, |m, code| {
        let hs: Vec<&[usize]> = pw
            .decode(m, code)
            .into_iter()
            .map(|h| site.values(cat.hom(m, 1)[h]))
            .collect();
        let sum: Vec<usize> = (0..=m).map(|i| hs.iter().map(|h| h[i]).sum()).collect();
        cat.hom_position(site.morphism(m, n, &sum))
    });
    a.check(&simplex, &pw.obj)?;
    b.check(&pw.obj, &simplex)?;
    Ok(Retraction {
        simplex,
        power: pw,
        a,
        b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn retraction_up_to_four() {
        let d = DeltaSite::new(4).unwrap();
        for n in 1..=4 {
            assert!(simplex_retraction(&d, n).unwrap().is_retraction());
        }
        assert!(simplex_retraction(&d, 5).is_err());
    }

    #[test]
    fn vertex_components_for_two() {
        let d = DeltaSite::new(2).unwrap();
        let r = simplex_retraction(&d, 2).unwrap();
        // vertex i ↦ (a₁(i), a₂(i)) = (0,0), (1,0), (1,1)
        for (i, expect) in [[0, 0], [1, 0], [1, 1]].into_iter().enumerate() {
            let coords = r.power.decode(0, r.a.at(0, i));
            let vals: Vec<usize> = coords.iter().map(|&h| d.values(d.cat.hom(0, 1)[h])[0]).collect();
            assert_eq!(vals, expect);
        }
    }

    #[test]
    fn one_dimensional_retraction_is_identity() {
        let d = DeltaSite::new(1).unwrap();
        let r = simplex_retraction(&d, 1).unwrap();
        assert_eq!(r.a, NatTrans::identity(&r.simplex));
        assert_eq!(r.b, NatTrans::identity(&r.power.obj));
    }
}
