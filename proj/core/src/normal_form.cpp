#include <quadlift/errors.hpp>
#include <quadlift/normal_form.hpp>

#include <map>
#include <set>
#include <stdexcept>

namespace quadlift {

namespace {

using GenMono = std::map<std::string, Rational>;

// Lexicographic comparison on exponent vectors over the union of keys. Unlike
// std::map's ordering this is compatible with multiplication, which makes the
// leading term (and hence the normalized sum base) independent of scaling.
int mono_cmp(const GenMono &a, const GenMono &b)
{
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() || j != b.end()) {
        int c;
        if (j == b.end() || (i != a.end() && i->first < j->first)) {
            c = cmp(i->second, 0);
            ++i;
        } else if (i == a.end() || j->first < i->first) {
            c = cmp(0, j->second);
            ++j;
        } else {
            c = cmp(i->second, j->second);
            ++i;
            ++j;
        }
        if (c != 0) {
            return c < 0 ? -1 : 1;
        }
    }
    return 0;
}

struct MonoLess {
    bool operator()(const GenMono &a, const GenMono &b) const { return mono_cmp(a, b) < 0; }
};

using GenPoly = std::map<GenMono, Rational, MonoLess>;

std::string render_mono(const GenMono &m)
{
    if (m.empty()) {
        return "1";
    }
    std::string out;
    for (const auto &[k, e] : m) {
        if (!out.empty()) {
            out += "*";
        }
        out += "[" + k + "]";
        if (e != 1) {
            out += "^" + to_string(e);
        }
    }
    return out;
}

std::string render_poly(const GenPoly &p)
{
    if (p.empty()) {
        return "0";
    }
    std::string out;
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        if (!out.empty()) {
            out += " + ";
        }
        out += "(" + to_string(it->second) + ")*" + render_mono(it->first);
    }
    return out;
}

void add_to(GenPoly &p, const GenMono &m, const Rational &c)
{
    if (c == 0) {
        return;
    }
    auto [it, inserted] = p.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) {
            p.erase(it);
        }
    }
}

bool rational_root(const mpz_class &v, unsigned long q, mpz_class &out)
{
    if (v < 0) {
        return false;
    }
    return mpz_root(out.get_mpz_t(), v.get_mpz_t(), q) != 0;
}

class Normalizer {
public:
    GenPoly run(const Expr &e)
    {
        switch (e.kind()) {
        case Kind::Constant:
            return constant(e.value());
        case Kind::Parameter:
            return symbol("p:" + e.name(), Rational(1));
        case Kind::Variable:
            return symbol("v:" + e.name(), Rational(1));
        case Kind::Sum: {
            GenPoly acc;
            for (const auto &t : e.operands()) {
                for (const auto &[m, c] : run(t)) {
                    add_to(acc, m, c);
                }
            }
            return acc;
        }
        case Kind::Product: {
            GenPoly acc = constant(Rational(1));
            for (const auto &t : e.operands()) {
                acc = mul(acc, run(t));
            }
            return acc;
        }
        case Kind::Power:
            return power(run(e.base()), e.exponent());
        case Kind::Exp:
            return exponential(run(e.argument()));
        default:
            return symbol(std::string(function_name(e.kind())) + ":" + render_poly(run(e.argument())), Rational(1));
        }
    }

    GenPoly mul(const GenPoly &a, const GenPoly &b)
    {
        GenPoly out;
        for (const auto &[ma, ca] : a) {
            for (const auto &[mb, cb] : b) {
                GenMono m = mono_mul(ma, mb);
                Rational c = ca * cb;
                fold_constants(m, c);
                add_to(out, m, c);
            }
        }
        return out;
    }

    GenPoly power(const GenPoly &b, const Rational &r)
    {
        if (r == 0) {
            return constant(Rational(1));
        }
        if (is_integer(r) && r > 0) {
            return ipow(b, to_int(r));
        }
        if (b.empty()) {
            if (r < 0) {
                throw DomainError("division by zero");
            }
            return {};
        }
        if (b.size() == 1) {
            const auto &[m, c] = *b.begin();
            GenMono out;
            for (const auto &[k, e] : m) {
                out[k] = e * r;
            }
            GenPoly p;
            add_to(p, {}, Rational(1));
            p = mul(p, scalar_power(c, r));
            GenPoly q;
            for (const auto &[pm, pc] : p) {
                GenMono mm = mono_mul(pm, out);
                Rational cc = pc;
                fold_constants(mm, cc);
                add_to(q, mm, cc);
            }
            return q;
        }
        // Normalize the base by its leading term so that scalings share one key.
        const auto &[lead_m, lead_c] = *b.rbegin();
        GenPoly s;
        for (const auto &[m, c] : b) {
            add_to(s, mono_div(m, lead_m), c / lead_c);
        }
        const std::string key = "s:" + render_poly(s);
        m_sums.emplace(key, s);
        GenPoly lead;
        add_to(lead, lead_m, lead_c);
        GenPoly out = power(lead, r);
        GenMono sm{{key, r}};
        return mul(out, GenPoly{{sm, Rational(1)}});
    }

    GenPoly ipow(const GenPoly &b, int n)
    {
        GenPoly out = constant(Rational(1));
        for (int i = 0; i < n; ++i) {
            out = mul(out, b);
        }
        return out;
    }

    const std::map<std::string, GenPoly> &sums() const { return m_sums; }

    static GenMono mono_mul(const GenMono &a, const GenMono &b)
    {
        GenMono out = a;
        for (const auto &[k, e] : b) {
            auto [it, inserted] = out.emplace(k, e);
            if (!inserted) {
                it->second += e;
                if (it->second == 0) {
                    out.erase(it);
                }
            }
        }
        return out;
    }

    static GenMono mono_div(const GenMono &a, const GenMono &b)
    {
        GenMono neg;
        for (const auto &[k, e] : b) {
            neg[k] = -e;
        }
        return mono_mul(a, neg);
    }

private:
    static GenPoly constant(const Rational &q)
    {
        GenPoly p;
        add_to(p, {}, q);
        return p;
    }

    static GenPoly symbol(const std::string &key, const Rational &e)
    {
        GenPoly p;
        add_to(p, GenMono{{key, e}}, Rational(1));
        return p;
    }

    // c^r for a rational constant; irrational results become a constant base.
    GenPoly scalar_power(const Rational &c, const Rational &r)
    {
        if (is_integer(r)) {
            if (c == 0 && r < 0) {
                throw DomainError("division by zero");
            }
            return constant(pow(c, to_int(r)));
        }
        if (c == 0) {
            return {};
        }
        if (c < 0) {
            throw DomainError("non-integer power of a negative constant");
        }
        const mpz_class p = r.get_num();
        const unsigned long q = r.get_den().get_ui();
        mpz_class rn;
        mpz_class rd;
        if (rational_root(c.get_num(), q, rn) && rational_root(c.get_den(), q, rd)) {
            return constant(pow(Rational(rn, rd), p.get_si()));
        }
        if (c == 1) {
            return constant(Rational(1));
        }
        return symbol("c:" + to_string(c), r);
    }

    // Folds integer powers of constant bases back into the coefficient.
    static void fold_constants(GenMono &m, Rational &c)
    {
        for (auto it = m.begin(); it != m.end();) {
            if (it->first.rfind("c:", 0) == 0 && is_integer(it->second)) {
                c *= pow(parse_rational(it->first.substr(2)), to_int(it->second));
                it = m.erase(it);
            } else {
                ++it;
            }
        }
    }

    static Rational parse_rational(const std::string &s)
    {
        Rational q(s);
        q.canonicalize();
        return q;
    }

    GenPoly exponential(const GenPoly &arg)
    {
        GenPoly out = constant(Rational(1));
        for (const auto &[m, c] : arg) {
            out = mul(out, symbol("e:" + render_mono(m), c));
        }
        return out;
    }

    std::map<std::string, GenPoly> m_sums;
};

// Clears and expands sum bases; returns the resulting generalized polynomial.
GenPoly clear_sum_bases(GenPoly p, Normalizer &nz)
{
    for (int round = 0; round < 64 && !p.empty(); ++round) {
        // Shift exponents of every sum base so the integer parts are non-negative.
        std::map<std::string, Rational> shift;
        for (const auto &[m, c] : p) {
            for (const auto &[k, e] : m) {
                if (k.rfind("s:", 0) != 0) {
                    continue;
                }
                mpz_class fl;
                mpz_fdiv_q(fl.get_mpz_t(), e.get_num_mpz_t(), e.get_den_mpz_t());
                Rational f(fl);
                auto it = shift.find(k);
                if (it == shift.end()) {
                    shift.emplace(k, f);
                } else if (f < it->second) {
                    it->second = f;
                }
            }
        }
        bool any = false;
        GenMono multiplier;
        for (auto &[k, f] : shift) {
            if (f < 0) {
                multiplier[k] = -f;
            }
        }
        GenPoly shifted;
        for (const auto &[m, c] : p) {
            add_to(shifted, Normalizer::mono_mul(m, multiplier), c);
        }
        GenPoly expanded;
        for (const auto &[m, c] : shifted) {
            GenMono rest;
            GenPoly factor;
            add_to(factor, {}, c);
            for (const auto &[k, e] : m) {
                if (k.rfind("s:", 0) == 0 && e >= 1) {
                    mpz_class fl;
                    mpz_fdiv_q(fl.get_mpz_t(), e.get_num_mpz_t(), e.get_den_mpz_t());
                    const Rational frac = e - Rational(fl);
                    if (frac != 0) {
                        rest[k] = frac;
                    }
                    factor = nz.mul(factor, nz.ipow(nz.sums().at(k), static_cast<int>(fl.get_si())));
                    any = true;
                } else {
                    rest[k] = e;
                }
            }
            for (const auto &[fm, fc] : factor) {
                add_to(expanded, Normalizer::mono_mul(fm, rest), fc);
            }
        }
        p = std::move(expanded);
        if (!any) {
            break;
        }
    }
    return p;
}

} // namespace

bool is_identically_zero(const Expr &e)
{
    Normalizer nz;
    GenPoly p = nz.run(e);
    if (p.empty()) {
        return true;
    }
    return clear_sum_bases(std::move(p), nz).empty();
}

std::string normal_form_string(const Expr &e)
{
    Normalizer nz;
    return render_poly(nz.run(e));
}

} // namespace quadlift
