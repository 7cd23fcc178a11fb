"""Independent oracle for kernel abelianizations.

Builds the 2-complex of the presentation (squares added), lifts it to the
finite cover given by the permutation image, and computes H1 of the cover
with sympy's Smith normal form after sparse unit-pivot elimination. H1 of
the cover is the abelianization of the kernel.

usage: python3 kernel_homology_oracle.py CASE.json [...] [--probe WORD]

Schemas below are transcribed from the relation lists directly, not from the
Rust sources. Slot letters follow the role order of each vertex kind.
"""
import json, re, sys
from collections import deque

SCHEMAS = {
 "one-point": (["a"], ["a = a'"]),
 "two-point/line-conic": (["t","c"], ["<t, c>", "<t', c>", "<t^-1 t' t, c>", "c' = c t' t c t^-1 t'^-1 c^-1"]),
 "two-point/conic-line": (["c","t"], ["<c', t>", "<c', t'>", "<c', t^-1 t' t>", "c = t' t c' t^-1 t'^-1"]),
 "three-point/line-two-conics": (["l","p","q"], ["[p, q]", "[p', q]", "[p, q^-1 q' q]", "[p', q^-1 q' q]",
   "<l, q>", "<l', q>", "<l^-1 l' l, q>", "q' = q l' l q l^-1 l'^-1 q^-1",
   "<l, p>", "<l', p>", "<l^-1 l' l, p>", "p' = p l' l p l^-1 l'^-1 p^-1"]),
 "three-point/conic-two-lines": (["a","c","b"], ["<a, c>", "<a', c>", "<a^-1 a' a, c>",
   "<c', b>", "<c', b'>", "<c', b^-1 b' b>",
   "b' b c' b^-1 b'^-1 = c a' a c a^-1 a'^-1 c^-1",
   "[c a c^-1, b]", "[c a c^-1, b']", "[c a' c^-1, b]", "[c a' c^-1, b']"]),
 "three-point/veronese": (["p","l","q"], ["<p', l>", "<p', l'>", "<p', l^-1 l' l>",
   "p = l' l p' l^-1 l'^-1",
   "<q, l' l p' l p'^-1 l^-1 l'^-1>", "<q, l' l p' l' p'^-1 l^-1 l'^-1>", "<q, l' l p' l^-1 l' l p'^-1 l^-1 l'^-1>",
   "q' = q l' l p' l' l p'^-1 l^-1 l'^-1 q l' l p' l^-1 l'^-1 p'^-1 l^-1 l'^-1 q^-1",
   "[p, q]", "[p, q']", "[p', q]", "[p', q']"]),
 "three-point/cayley": (["a","b","c"], ["b = b'",
   "[a', b'^-1 c b']", "[a', b'^-1 c^-1 c' c b']", "[a, b'^-1 c b']", "[a, b'^-1 c^-1 c' c b']",
   "<a, b'>", "<a', b'>", "<a'^-1 a a', b'>",
   "b' = a^-1 a'^-1 b'^-1 c' c b' b b'^-1 c^-1 c'^-1 b' a' a",
   "<b' b b'^-1, c>", "<b' b b'^-1, c'>", "<b' b b'^-1, c' c c'^-1>"]),
 "four-point": (["a","b","c","d"], ["<a', b>", "<a', b'>", "<a', b^-1 b' b>",
   "<c, d>", "<c', d>", "<c^-1 c' c, d>",
   "[b' b a' b^-1 b'^-1, d]",
   "[b' b a' b^-1 b'^-1, c^-1 c'^-1 d^-1 d' d c' c]",
   "<a, b>", "<a, b'>", "<a, b^-1 b' b>",
   "<c, d^-1 d' d>", "<c', d^-1 d' d>", "<c^-1 c' c, d^-1 d' d>",
   "[b' b a b^-1 b'^-1, d^-1 d' d]",
   "[b' b a b^-1 b'^-1, c^-1 c'^-1 d^-1 d'^-1 d d' d c' c]",
   "b' b a' b a'^-1 b^-1 b'^-1 = d c' d^-1",
   "b' b a' b' a'^-1 b^-1 b'^-1 = d c' c c'^-1 d^-1",
   "b' b a b a^-1 b^-1 b'^-1 = d^-1 d' d c' d^-1 d'^-1 d",
   "b' b a b' a^-1 b^-1 b'^-1 = d^-1 d' d c' c c'^-1 d^-1 d'^-1 d"]),
 "four-point/fan": (["a","b","c","d"], ["[b, c]", "[b', c]", "[a, c]", "[a', c]",
   "<a, b>", "<a', b>", "<a^-1 a' a, b>",
   "<c', d>", "<c', d'>", "<c', d^-1 d' d>",
   "[c b' c^-1, d' d c' d^-1 d'^-1]",
   "[b a' a b a^-1 a'^-1 b^-1, c^-1 d' d c' d^-1 d'^-1 c]",
   "[b a b^-1, c^-1 d' d c' d^-1 d'^-1 c]",
   "<c^-1 b' c, d>", "<c^-1 b' c, d'>", "<c^-1 b' c, d^-1 d' d>",
   "b a' a b a^-1 a'^-1 b^-1 = c^-1 d' d c b' c^-1 d^-1 d'^-1 c",
   "c = d' d c' d^-1 d'^-1",
   "[b a b^-1, c^-1 d c]", "[b a' b^-1, c^-1 d c]", "[b a b^-1, c^-1 d' c]", "[b a' b^-1, c^-1 d' c]"]),
 "five-point": (["a","b","c","d","e"], ["[c, d]", "[c', d]",
   "<d', e>", "<d', e'>", "<d', e^-1 e' e>",
   "<b, d>", "<b', d>", "<b^-1 b' b, d>",
   "[d c d^-1, e' e d' e^-1 e'^-1]", "[d c' d^-1, e' e d' e^-1 e'^-1]",
   "d b' b d b^-1 b'^-1 d^-1 = e' e d' e^-1 e'^-1",
   "[a, d]", "[a', d]", "[a, e' e d' e^-1 e'^-1]", "[a', e' e d' e^-1 e'^-1]",
   "<a', b>", "<a', b'>", "<a', b^-1 b' b>",
   "<d c d^-1, e>", "<d c' d^-1, e>", "<d c^-1 c' c d^-1, e>",
   "b' b a' b a'^-1 b^-1 b'^-1 = d^-1 e d c' d^-1 e^-1 d",
   "b' b a' b' a'^-1 b^-1 b'^-1 = d^-1 e d c' c c'^-1 d^-1 e^-1 d",
   "[b' b a' b^-1 b'^-1, d^-1 e d]",
   "[c' c b' b a' b^-1 b'^-1 c^-1 c'^-1, d^-1 e^-1 e' e d]",
   "<a, b>", "<a, b'>", "<a, b^-1 b' b>",
   "<d c d^-1, e^-1 e' e>", "<d c' d^-1, e^-1 e' e>", "<d c^-1 c' c d^-1, e^-1 e' e>",
   "b' b a b a^-1 b^-1 b'^-1 = d^-1 e^-1 e' e d c' d^-1 e^-1 e'^-1 e d",
   "b' b a b' a^-1 b^-1 b'^-1 = d^-1 e^-1 e' e d c' c c'^-1 d^-1 e^-1 e'^-1 e d",
   "[b' b a b^-1 b'^-1, d^-1 e^-1 e' e d]",
   "[c' c b' b a b^-1 b'^-1 c^-1 c'^-1, d^-1 e^-1 e'^-1 e e' e d]"]),
}

def inv(w): return [(g,-s) for (g,s) in reversed(w)]
def parse_word(s, bind):
    toks = re.findall(r"([a-z])('?)(\^-1)?", s)
    w=[]
    for name,p,i in toks:
        e = bind[name]
        g = 2*(e-1) + (1 if p else 0)
        w.append((g, -1 if i else 1))
    return w
def parse_rel(s, bind):
    s=s.strip()
    if s[0]=='[':
        x,y = s[1:-1].split(',')
        X,Y=parse_word(x,bind),parse_word(y,bind)
        return X+Y+inv(X)+inv(Y)
    if s[0]=='<':
        x,y = s[1:-1].split(',')
        X,Y=parse_word(x,bind),parse_word(y,bind)
        return X+Y+X+inv(Y)+inv(X)+inv(Y)
    if '=' in s:
        l,r=s.split('=')
        return parse_word(l,bind)+inv(parse_word(r,bind))
    return parse_word(s,bind)
def reduce(w):
    out=[]
    for x in w:
        if out and out[-1][0]==x[0] and out[-1][1]==-x[1]: out.pop()
        else: out.append(x)
    return out

def inv(w): return [(g,-s) for (g,s) in reversed(w)]
def parse_word(s, bind):
    toks = re.findall(r"([a-z])('?)(\^-1)?", s)
    w=[]
    for name,p,i in toks:
        e = bind[name]
        g = 2*(e-1) + (1 if p else 0)
        w.append((g, -1 if i else 1))
    return w
def parse_rel(s, bind):
    s=s.strip()
    if s[0]=='[':
        x,y = s[1:-1].split(',')
        X,Y=parse_word(x,bind),parse_word(y,bind)
        return X+Y+inv(X)+inv(Y)
    if s[0]=='<':
        x,y = s[1:-1].split(',')
        X,Y=parse_word(x,bind),parse_word(y,bind)
        return X+Y+X+inv(Y)+inv(X)+inv(Y)
    if '=' in s:
        l,r=s.split('=')
        return parse_word(l,bind)+inv(parse_word(r,bind))
    return parse_word(s,bind)
def reduce(w):
    out=[]
    for x in w:
        if out and out[-1][0]==x[0] and out[-1][1]==-x[1]: out.pop()
        else: out.append(x)
    return out

def perm_of_trans(n,a,b):
    p=list(range(n)); p[a-1],p[b-1]=p[b-1],p[a-1]; return tuple(p)
def mul(p,q): return tuple(q[p[i]] for i in range(len(p)))  # apply p then q
def pinv(p):
    r=[0]*len(p)
    for i,x in enumerate(p): r[x]=i
    return tuple(r)
def images(case):
    c=CASES[case]; n=c['n']; im=[]
    for j in range(1,c['m']+1):
        t=perm_of_trans(n,*c['edges'][j]); im+=[t,t]
    return im
def eval_word(w, im, n):
    p=tuple(range(n))
    for g,s in w: p=mul(p, im[g] if s>0 else pinv(im[g]))
    return p

def closure(im,n):
    e=tuple(range(n)); seen={e:0}; order=[e]; q=deque([e])
    while q:
        x=q.popleft()
        for g in im:
            y=mul(x,g)
            if y not in seen: seen[y]=len(order); order.append(y); q.append(y)
    return order, seen

# sparse SNF-ish: returns (rank, torsion list)
def abel_invariants(rows, ncols):
    # rows: list of dict col->int
    rows=[dict(r) for r in rows if r]
    import sympy
    alive_cols=set(range(ncols))
    changed=True
    # unit pivot elimination
    colidx={}
    def rebuild():
        ci={}
        for i,r in enumerate(rows):
            for c in r: ci.setdefault(c,set()).add(i)
        return ci
    active=[True]*len(rows)
    ci=rebuild()
    removed_cols=0
    while True:
        piv=None
        best=None
        for i,r in enumerate(rows):
            if not active[i]: continue
            for c,v in r.items():
                if abs(v)==1:
                    cost=len(ci.get(c,()))
                    if best is None or cost<best: best=cost; piv=(i,c)
            if best is not None and best<=2: break
        if piv is None: break
        i,c=piv; r=rows[i]; v=r[c]
        # eliminate column c from other rows: row_k -= (row_k[c]*v) * row_i
        for k in list(ci.get(c,())):
            if k==i or not active[k]: continue
            f=rows[k][c]*v
            for cc,vv in r.items():
                nv=rows[k].get(cc,0)-f*vv
                if nv==0:
                    if cc in rows[k]: del rows[k][cc]; ci[cc].discard(k)
                else:
                    if cc not in rows[k]: ci.setdefault(cc,set()).add(k)
                    rows[k][cc]=nv
        active[i]=False
        for cc in r: ci[cc].discard(i)
        alive_cols.discard(c)
        removed_cols+=1
    rest=[rows[i] for i in range(len(rows)) if active[i] and rows[i]]
    cols=sorted(alive_cols)
    if not rest:
        return len(cols), []
    cmap={c:j for j,c in enumerate(cols)}
    M=sympy.zeros(len(rest),len(cols))
    for i,r in enumerate(rest):
        for c,v in r.items(): M[i,cmap[c]]=v
    from sympy.matrices.normalforms import smith_normal_form
    S=smith_normal_form(M, domain=sympy.ZZ)
    d=[abs(S[i,i]) for i in range(min(S.shape)) if S[i,i]!=0]
    rank=len(cols)-len(d)
    return rank, sorted([x for x in d if x>1])


ROLES = {'one-point': ['edge'], 'two-point/line-conic': ['line', 'conic'], 'two-point/conic-line': ['conic', 'line'], 'three-point/line-two-conics': ['line', 'conic1', 'conic2'], 'three-point/conic-two-lines': ['line1', 'conic', 'line2'], 'three-point/veronese': ['conic1', 'line', 'conic2'], 'three-point/cayley': ['e1', 'e2', 'e3'], 'four-point': ['e1', 'e2', 'e3', 'e4'], 'four-point/fan': ['e1', 'e2', 'e3', 'e4'], 'five-point': ['e1', 'e2', 'e3', 'e4', 'e5']}


def load(path):
    d = json.load(open(path))
    edges = {e["index"]: tuple(e["planes"]) for e in d["edges"]}
    verts = []
    for v in sorted(d["vertices"], key=lambda v: v["id"]):
        roles = v.get("roles") or {"edge": v["incident"][0]}
        verts.append((v["kind"], [roles[r] for r in ROLES[v["kind"]]]))
    return dict(name=d["name"], n=d["planes"], m=len(edges), edges=edges, verts=verts)


def build(c, projective=True):
    rels = []
    for kind, inc in c["verts"]:
        letters, temps = SCHEMAS[kind]
        bind = dict(zip(letters, inc))
        for t in temps:
            rels.append(reduce(parse_rel(t, bind)))
    at = [set() for _ in range(c["m"] + 1)]
    for vi, (_, inc) in enumerate(c["verts"]):
        for e in inc:
            at[e].add(vi)
    for a in range(1, c["m"] + 1):
        for b in range(a + 1, c["m"] + 1):
            if not (at[a] & at[b]):
                for pa in (0, 1):
                    for pb in (0, 1):
                        A = [(2 * (a - 1) + pa, 1)]
                        B = [(2 * (b - 1) + pb, 1)]
                        rels.append(A + B + inv(A) + inv(B))
    if projective:
        w = []
        for j in range(c["m"], 0, -1):
            w += [(2 * (j - 1) + 1, 1), (2 * (j - 1), 1)]
        rels.append(w)
    return [r for r in rels if r]


def images(c):
    im = []
    for j in range(1, c["m"] + 1):
        t = perm_of_trans(c["n"], *c["edges"][j])
        im += [t, t]
    return im


def kernel_h1(c, projective=True, extra=()):
    G = 2 * c["m"]
    rels = build(c, projective) + [[(g, 1), (g, 1)] for g in range(G)] + list(extra)
    im = images(c)
    for r in rels:
        assert eval_word(r, im, c["n"]) == tuple(range(c["n"])), r
    elems, idx = closure(im, c["n"])
    V = len(elems)
    faces = []
    for v in range(V):
        for r in rels:
            d = {}
            u = v
            for g, s in r:
                if s > 0:
                    e = u * G + g
                    d[e] = d.get(e, 0) + 1
                    u = idx[mul(elems[u], im[g])]
                else:
                    u = idx[mul(elems[u], pinv(im[g]))]
                    e = u * G + g
                    d[e] = d.get(e, 0) - 1
            assert u == v
            faces.append({k: x for k, x in d.items() if x})
    rank, tors = abel_invariants(faces, V * G)
    return V, rank - (V - 1), tors


def gens_word(text, m):
    """Words over g1 g1p ... like `g3 g4 g3 g2^-1`."""
    out = []
    for name, p, e in re.findall(r"g(\d+)(p?)(\^-1)?", text):
        out.append((2 * (int(name) - 1) + (1 if p else 0), -1 if e else 1))
    return out


def fmt(rank, tors):
    parts = (["Z^%d" % rank] if rank else []) + ["Z/%d" % t for t in tors]
    return " + ".join(parts) or "0"


if __name__ == "__main__":
    args = sys.argv[1:]
    probe = None
    if "--probe" in args:
        i = args.index("--probe")
        probe = args[i + 1]
        del args[i:i + 2]
    for path in args:
        c = load(path)
        for proj in (True, False):
            V, rank, tors = kernel_h1(c, proj)
            print(c["name"], "projective" if proj else "affine", "index", V, fmt(rank, tors), flush=True)
        if probe:
            x = gens_word(probe, c["m"])
            V, rank, tors = kernel_h1(c, False, [x])
            print(c["name"], "affine with", probe, "killed:", fmt(rank, tors), flush=True)
