class Zero {
    add(n)  { return n; }
}

class Succ {
    pred;
    Succ(n) { this.pred=n; }
    add(n)  { return pred.add(new Succ(n)); }
}
