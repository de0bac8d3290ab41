//! Data-parallel map over slices. With the `parallel` feature the work runs
//! on a rayon pool; without it, or with one thread, it runs in order on the
//! calling thread. Results always come back in input order.

#[cfg(feature = "parallel")]
use std::sync::Arc;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone)]
pub struct Pool {
    #[cfg(feature = "parallel")]
    inner: Option<Arc<rayon::ThreadPool>>,
}

impl Pool {
    pub fn sequential() -> Pool {
        Pool {
            #[cfg(feature = "parallel")]
            inner: None,
        }
    }

    /// `threads == 0` uses every available core; `threads == 1` is sequential.
    #[cfg(feature = "parallel")]
    pub fn new(threads: usize) -> Pool {
        if threads == 1 {
            return Pool::sequential();
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("failed to start worker threads");
        Pool {
            inner: Some(Arc::new(pool)),
        }
    }

    #[cfg(not(feature = "parallel"))]
    pub fn new(_threads: usize) -> Pool {
        Pool::sequential()
    }

    pub fn threads(&self) -> usize {
        #[cfg(feature = "parallel")]
        if let Some(p) = &self.inner {
            return p.current_num_threads();
        }
        1
    }

    pub fn map<T, U, F>(&self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if let Some(p) = &self.inner {
            return p.install(|| items.par_iter().map(f).collect());
        }
        items.iter().map(f).collect()
    }

    /// Like [`Pool::map`] but stops at the first error (in input order).
    pub fn try_map<T, U, E, F>(&self, items: &[T], f: F) -> Result<Vec<U>, E>
    where
        T: Sync,
        U: Send,
        E: Send,
        F: Fn(&T) -> Result<U, E> + Sync + Send,
    {
        self.map(items, f).into_iter().collect()
    }
}

impl Default for Pool {
    fn default() -> Self {
        Pool::new(0)
    }
}

impl std::fmt::Debug for Pool {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Pool({} threads)", self.threads())
    }
}
