use super::{Assignment, Formula};
use crate::error::{Error, Result};
use crate::hypercore::Hypergraph;

/// Formula with variables resolved to environment slots.
enum Node {
    Eq(usize, usize),
    Edge(Vec<usize>),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Implies(Box<Node>, Box<Node>),
    Exists(usize, Box<Node>),
    Forall(usize, Box<Node>),
}

struct Compiler {
    scope: Vec<(String, usize)>,
    slots: usize,
}

impl Compiler {
    fn lookup(&self, v: &str) -> Result<usize> {
        self.scope
            .iter()
            .rev()
            .find(|(name, _)| name == v)
            .map(|&(_, slot)| slot)
            .ok_or_else(|| Error::UnboundVariable(v.to_string()))
    }

    fn compile(&mut self, f: &Formula) -> Result<Node> {
        Ok(match f {
            Formula::Eq(a, b) => Node::Eq(self.lookup(a)?, self.lookup(b)?),
            Formula::Edge(vs) => Node::Edge(vs.iter().map(|v| self.lookup(v)).collect::<Result<_>>()?),
            Formula::Not(g) => Node::Not(Box::new(self.compile(g)?)),
            Formula::And(fs) => Node::And(fs.iter().map(|g| self.compile(g)).collect::<Result<_>>()?),
            Formula::Or(fs) => Node::Or(fs.iter().map(|g| self.compile(g)).collect::<Result<_>>()?),
            Formula::Implies(a, b) => Node::Implies(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let slot = self.slots;
                self.slots += 1;
                self.scope.push((v.clone(), slot));
                let body = Box::new(self.compile(g)?);
                self.scope.pop();
                if matches!(f, Formula::Exists(..)) {
                    Node::Exists(slot, body)
                } else {
                    Node::Forall(slot, body)
                }
            }
        })
    }
}

struct Machine<'a> {
    g: &'a Hypergraph,
    env: Vec<usize>,
    key: Vec<usize>,
    visits: u64,
    budget: u64,
}

impl Machine<'_> {
    fn eval(&mut self, node: &Node) -> Result<bool> {
        self.visits += 1;
        if self.visits > self.budget {
            return Err(Error::BudgetExceeded {
                what: "formula evaluation node visits",
                budget: self.budget,
            });
        }
        Ok(match node {
            Node::Eq(a, b) => self.env[*a] == self.env[*b],
            Node::Edge(slots) => {
                self.key.clear();
                self.key.extend(slots.iter().map(|&s| self.env[s]));
                self.key.sort_unstable();
                !self.key.windows(2).any(|w| w[0] == w[1]) && self.g.has_sorted_edge(&self.key)
            }
            Node::Not(f) => !self.eval(f)?,
            Node::And(fs) => {
                for f in fs {
                    if !self.eval(f)? {
                        return Ok(false);
                    }
                }
                true
            }
            Node::Or(fs) => {
                for f in fs {
                    if self.eval(f)? {
                        return Ok(true);
                    }
                }
                false
            }
            Node::Implies(a, b) => !self.eval(a)? || self.eval(b)?,
            Node::Exists(slot, body) | Node::Forall(slot, body) => {
                let want = matches!(node, Node::Exists(..));
                for v in 0..self.g.n() {
                    self.env[*slot] = v;
                    if self.eval(body)? == want {
                        return Ok(want);
                    }
                }
                !want
            }
        })
    }
}

/// Tarskian truth of `f` in `g` under `a`; quantifiers range over `V(g)`.
///
/// Every visited AST node counts against `budget`; exceeding it yields
/// `BudgetExceeded`.
pub fn evaluate(g: &Hypergraph, f: &Formula, a: &Assignment, budget: u64) -> Result<bool> {
    let mut compiler = Compiler {
        scope: Vec::new(),
        slots: 0,
    };
    let mut env = Vec::new();
    for (name, &vertex) in a {
        if vertex >= g.n() {
            return Err(Error::VertexOutOfRange { vertex, n: g.n() });
        }
        compiler.scope.push((name.clone(), compiler.slots));
        compiler.slots += 1;
        env.push(vertex);
    }
    let node = compiler.compile(f)?;
    env.resize(compiler.slots, 0);
    let mut m = Machine {
        g,
        env,
        key: Vec::with_capacity(g.s()),
        visits: 0,
        budget,
    };
    m.eval(&node)
}

pub fn evaluate_sentence(g: &Hypergraph, f: &Formula, budget: u64) -> Result<bool> {
    evaluate(g, f, &Assignment::new(), budget)
}
