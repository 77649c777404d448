# Symbolic oracle for the reduced warped system: solves S_ss = S_xx = 0 for
# (f'', V'') on the full metric V^2 dr^2 + ds^2 + f^2 g_{S^{n-2}} and checks S_rr.
# Values printed here are frozen in tests/test_warped.cpp.
import sympy as sp
s,r=sp.symbols('s r')
def accel(n, fval, dfval, vval, dvval):
    F=sp.Function('f')(s); V=sp.Function('V')(s)
    th=sp.symbols('t1:%d'%(n-1))
    X=[r,s]+list(th)
    # round S^{n-2} metric in hyperspherical coordinates
    sph=[]; pre=1
    for i in range(n-2):
        sph.append(pre); pre=pre*sp.sin(th[i])**2
    g=sp.diag(V**2,1,*[F**2*c for c in sph])
    N=n; gi=g.inv()
    Gam=[[[sum(gi[k,l]*(sp.diff(g[l,i],X[j])+sp.diff(g[l,j],X[i])-sp.diff(g[i,j],X[l])) for l in range(N))/2 for j in range(N)] for i in range(N)] for k in range(N)]
    def Ric(i,j):
        return sp.simplify(sum(sp.diff(Gam[k][i][j],X[k]) - sp.diff(Gam[k][i][k],X[j]) + sum(Gam[k][k][l]*Gam[l][i][j]-Gam[k][j][l]*Gam[l][i][k] for l in range(N)) for k in range(N)))
    def hess(i,j): return sp.diff(V,X[i],X[j]) - sum(Gam[k][i][j]*sp.diff(V,X[k]) for k in range(N))
    lap=sum(gi[i,i]*hess(i,i) for i in range(N))
    S=lambda i,j: V*Ric(i,j)-hess(i,j)+lap*g[i,j]
    fpp,vpp=sp.symbols('fpp vpp')
    sub=lambda e: e.subs({sp.Derivative(F,(s,2)):fpp, sp.Derivative(V,(s,2)):vpp}).subs({sp.Derivative(F,s):dfval, sp.Derivative(V,s):dvval}).subs({F:fval,V:vval})
    e1=sub(S(1,1)); e2=sub(S(2,2)/g[2,2]*fval**2 if False else S(2,2))
    e2=sp.simplify(e2.subs({th[i]:sp.pi/2 for i in range(len(th))}))
    sol=sp.solve([e1,e2],[fpp,vpp],dict=True)[0]
    e0=sp.simplify(sub(S(0,0)).subs(sol))
    return sol, e0
print(accel(5, 2, 0, sp.Rational(3,2), 0))
print(accel(4, sp.Rational(13,10), sp.Rational(1,5), sp.Rational(7,10), -sp.Rational(1,10)))
print(accel(3, sp.Rational(13,10), 0, sp.Rational(7,10), 0))
