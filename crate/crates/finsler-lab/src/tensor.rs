//! Minimal dense tensor holder used for small rank-(r,s) objects over one
//! chart point. Index convention throughout the crate: all lower slots
//! first in declared order, the upper slot last.

#[derive(Clone, Debug)]
pub struct Tn<T> {
    shape: Vec<usize>,
    strides: Vec<usize>,
    data: Vec<T>,
}

impl<T> Tn<T> {
    pub fn from_fn(shape: &[usize], mut f: impl FnMut(&[usize]) -> T) -> Self {
        let strides = strides_of(shape);
        let len: usize = shape.iter().product();
        let mut data = Vec::with_capacity(len);
        let mut idx = vec![0usize; shape.len()];
        for flat in 0..len {
            unflatten(flat, shape, &mut idx);
            data.push(f(&idx));
        }
        Tn {
            shape: shape.to_vec(),
            strides,
            data,
        }
    }

    /// Row-major data with the given shape; lengths must agree.
    pub fn from_vec(shape: &[usize], data: Vec<T>) -> Self {
        let len: usize = shape.iter().product();
        assert_eq!(data.len(), len, "shape {shape:?} wants {len} entries");
        Tn {
            shape: shape.to_vec(),
            strides: strides_of(shape),
            data,
        }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn at(&self, idx: &[usize]) -> &T {
        &self.data[self.flat(idx)]
    }

    pub fn at_mut(&mut self, idx: &[usize]) -> &mut T {
        let k = self.flat(idx);
        &mut self.data[k]
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Tn<U> {
        Tn {
            shape: self.shape.clone(),
            strides: self.strides.clone(),
            data: self.data.iter().map(f).collect(),
        }
    }

    fn flat(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len());
        idx.iter()
            .zip(&self.strides)
            .map(|(i, s)| i * s)
            .sum()
    }
}

fn strides_of(shape: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; shape.len()];
    for k in (0..shape.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * shape[k + 1];
    }
    strides
}

fn unflatten(mut flat: usize, shape: &[usize], out: &mut [usize]) {
    for k in (0..shape.len()).rev() {
        out[k] = flat % shape[k];
        flat /= shape[k];
    }
}
