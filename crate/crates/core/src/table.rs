use std::collections::HashMap;
use std::hash::Hash;

/// Insertion-ordered map from DP record keys to a payload.
#[derive(Clone, Debug)]
pub(crate) struct Table<K, V> {
    keys: Vec<K>,
    values: Vec<V>,
    index: HashMap<K, usize>,
}

impl<K: Clone + Eq + Hash, V> Default for Table<K, V> {
    fn default() -> Self {
        Self {
            keys: Vec::new(),
            values: Vec::new(),
            index: HashMap::new(),
        }
    }
}

impl<K: Clone + Eq + Hash, V> Table<K, V> {
    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn contains(&self, key: &K) -> bool {
        self.index.contains_key(key)
    }

    pub fn find(&self, key: &K) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn key(&self, i: usize) -> &K {
        &self.keys[i]
    }

    pub fn value(&self, i: usize) -> &V {
        &self.values[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &K, &V)> {
        self.keys
            .iter()
            .zip(&self.values)
            .enumerate()
            .map(|(i, (k, v))| (i, k, v))
    }

    /// Inserts `key` unless present; keeps the first payload.
    pub fn insert(&mut self, key: K, value: V) {
        self.offer(key, value, |_, _| false);
    }

    /// Inserts `key`, or replaces its payload when `better(new, old)`.
    pub fn offer(&mut self, key: K, value: V, better: impl Fn(&V, &V) -> bool) {
        match self.index.get(&key) {
            Some(&i) => {
                if better(&value, &self.values[i]) {
                    self.values[i] = value;
                }
            }
            None => {
                self.index.insert(key.clone(), self.keys.len());
                self.keys.push(key);
                self.values.push(value);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::Table;

    #[test]
    fn offer_keeps_best_in_insertion_order() {
        let mut t: Table<&str, i32> = Table::default();
        t.offer("a", 3, |n, o| n < o);
        t.offer("b", 1, |n, o| n < o);
        t.offer("a", 2, |n, o| n < o);
        t.offer("a", 5, |n, o| n < o);
        t.insert("b", 0);
        let got: Vec<_> = t.iter().map(|(i, k, v)| (i, *k, *v)).collect();
        assert_eq!(got, vec![(0, "a", 2), (1, "b", 1)]);
        assert_eq!(t.len(), 2);
        assert_eq!(t.find(&"b"), Some(1));
        assert!(t.contains(&"a") && t.find(&"c").is_none());
    }
}
