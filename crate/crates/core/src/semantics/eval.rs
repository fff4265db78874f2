use super::model::{ModelError, PreferentialModel};
use super::worldset::WorldSet;
use crate::syntax::{Conditional, Formula, Modality};

impl PreferentialModel {
    /// The `<`-minimal members of `ws`.
    pub fn min_preferred(&self, ws: &WorldSet) -> WorldSet {
        WorldSet::from_indices(
            self.world_count(),
            ws.iter().filter(|&w| !self.better(w).intersects(ws)),
        )
    }

    /// The set of worlds where `f` holds.
    pub fn extension(&self, f: &Formula) -> WorldSet {
        let n = self.world_count();
        match f {
            Formula::Atom(p) => self.atom_extension(p),
            Formula::Bottom => WorldSet::empty(n),
            Formula::Top => WorldSet::full(n),
            Formula::Not(a) => self.extension(a).complement(),
            Formula::And(a, b) => self.extension(a).intersection(&self.extension(b)),
            Formula::Or(a, b) => self.extension(a).union(&self.extension(b)),
            Formula::Implies(a, b) => self.extension(a).complement().union(&self.extension(b)),
            Formula::Iff(a, b) => {
                let (a, b) = (self.extension(a), self.extension(b));
                a.intersection(&b)
                    .union(&a.complement().intersection(&b.complement()))
            }
            Formula::Box(m, a) => self.modal(m, a, false, |succ, ext| succ.is_subset(ext)),
            Formula::Dia(m, a) => self.modal(m, a, false, |succ, ext| succ.intersects(ext)),
            Formula::DefBox(m, a) => self.modal(m, a, true, |succ, ext| succ.is_subset(ext)),
            Formula::DefDia(m, a) => self.modal(m, a, true, |succ, ext| succ.intersects(ext)),
        }
    }

    fn modal(
        &self,
        m: &Modality,
        body: &Formula,
        most_normal: bool,
        test: impl Fn(&WorldSet, &WorldSet) -> bool,
    ) -> WorldSet {
        let n = self.world_count();
        let ext = self.extension(body);
        let empty = WorldSet::empty(n);
        let table = self.successor_table(m);
        WorldSet::from_indices(
            n,
            (0..n).filter(|&w| {
                let succ = table.map_or(&empty, |t| &t[w]);
                if most_normal {
                    test(&self.min_preferred(succ), &ext)
                } else {
                    test(succ, &ext)
                }
            }),
        )
    }

    pub fn holds_at(&self, world: &str, f: &Formula) -> Result<bool, ModelError> {
        let w = self
            .world_index(world)
            .ok_or_else(|| ModelError::UnknownWorld {
                world: world.to_string(),
                context: "query".to_string(),
            })?;
        Ok(self.extension(f).contains(w))
    }

    /// True in every world.
    pub fn globally_true(&self, f: &Formula) -> bool {
        self.extension(f).is_full()
    }

    /// `a |~ b`: every most preferred `a`-world is a `b`-world.
    pub fn holds_conditional(&self, c: &Conditional) -> bool {
        self.min_preferred(&self.extension(&c.antecedent))
            .is_subset(&self.extension(&c.consequent))
    }

    pub fn satisfies_kb_globally<'a>(&self, kb: impl IntoIterator<Item = &'a Formula>) -> bool {
        kb.into_iter().all(|f| self.globally_true(f))
    }

    /// Names of the worlds in `ws`, in model order.
    pub fn names(&self, ws: &WorldSet) -> Vec<String> {
        ws.iter().map(|w| self.world_name(w).to_string()).collect()
    }
}
