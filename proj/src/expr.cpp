#include "adelix/expr.hpp"

#include <cctype>
#include <optional>

#include "adelix/errors.hpp"

namespace adelix {

namespace {

std::string at_byte(size_t pos) { return " at byte " + std::to_string(pos); }

enum class Tok { int_lit, dec_lit, var_t, dt, diff_d, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
    Tok kind = Tok::end;
    Rational val;
    size_t pos = 0;
};

/* Tokens are single characters plus numbers and the three words t, dt, d.
 * Decimal literals become exact rationals; there is no float anywhere in the
 * pipeline. Offsets are bytes from the start of the original command-line
 * string (base_ shifts them when a substring is parsed).
 */
class Lexer {
  public:
    Lexer(const std::string& src, size_t base) : s_(src), base_(base) { advance(); }
    const Token& cur() const { return cur_; }
    void advance() { cur_ = lex(); }

  private:
    Token lex() {
        while (i_ < s_.size() && std::isspace((unsigned char)s_[i_])) ++i_;
        Token t;
        t.pos = base_ + i_;
        if (i_ >= s_.size()) return t;
        char c = s_[i_];
        if (std::isdigit((unsigned char)c)) return lex_number(t);
        if (std::isalpha((unsigned char)c)) return lex_word(t);
        ++i_;
        switch (c) {
            case '+': t.kind = Tok::plus; return t;
            case '-': t.kind = Tok::minus; return t;
            case '*': t.kind = Tok::star; return t;
            case '/': t.kind = Tok::slash; return t;
            case '^': t.kind = Tok::caret; return t;
            case '(': t.kind = Tok::lparen; return t;
            case ')': t.kind = Tok::rparen; return t;
        }
        throw_usage("syntax error" + at_byte(t.pos) + ": unexpected character '" + std::string(1, c) + "'");
    }

    Token lex_number(Token t) {
        size_t j = i_;
        while (j < s_.size() && std::isdigit((unsigned char)s_[j])) ++j;
        Rational v = Rational(Int(s_.substr(i_, j - i_)));
        if (j < s_.size() && s_[j] == '.') {
            size_t k = j + 1;
            while (k < s_.size() && std::isdigit((unsigned char)s_[k])) ++k;
            if (k == j + 1)
                throw_usage("syntax error" + at_byte(base_ + j) + ": digits required after the decimal point");
            std::string frac = s_.substr(j + 1, k - j - 1);
            Int den = 1;
            for (size_t q = 0; q < frac.size(); ++q) den *= 10;
            v += Rational(Int(frac)) / Rational(den);
            t.kind = Tok::dec_lit;
            i_ = k;
        } else {
            t.kind = Tok::int_lit;
            i_ = j;
        }
        t.val = v;
        return t;
    }

    Token lex_word(Token t) {
        size_t j = i_;
        while (j < s_.size() && std::isalnum((unsigned char)s_[j])) ++j;
        std::string w = s_.substr(i_, j - i_);
        i_ = j;
        if (w == "t") t.kind = Tok::var_t;
        else if (w == "dt") t.kind = Tok::dt;
        else if (w == "d") t.kind = Tok::diff_d;
        else throw_usage("syntax error" + at_byte(t.pos) + ": unknown symbol '" + w + "'");
        return t;
    }

    const std::string& s_;
    size_t base_;
    size_t i_ = 0;
    Token cur_;
};

ExprPtr node(ExprKind k, Rational v, ExprPtr a, ExprPtr b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->value = std::move(v);
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

// Best-effort constant folding, used only to validate ^ exponents written as
// parenthesized expressions. Anything with t or a differential is not a
// constant and yields nullopt.
std::optional<Rational> fold_const(const ExprPtr& e) {
    switch (e->kind) {
        case ExprKind::int_lit:
        case ExprKind::rat_lit:
            return e->value;
        case ExprKind::neg: {
            auto a = fold_const(e->lhs);
            if (!a) return std::nullopt;
            return Rational(-*a);
        }
        case ExprKind::add:
        case ExprKind::sub:
        case ExprKind::mul:
        case ExprKind::div: {
            auto a = fold_const(e->lhs), b = fold_const(e->rhs);
            if (!a || !b) return std::nullopt;
            if (e->kind == ExprKind::add) return Rational(*a + *b);
            if (e->kind == ExprKind::sub) return Rational(*a - *b);
            if (e->kind == ExprKind::mul) return Rational(*a * *b);
            if (*b == 0) return std::nullopt;
            return Rational(*a / *b);
        }
        case ExprKind::pow: {
            auto a = fold_const(e->lhs);
            if (!a) return std::nullopt;
            Rational ev = e->rhs->value;
            if (!ev.get_num().fits_slong_p() || abs(ev.get_num()) > 4096) return std::nullopt;
            long ex = ev.get_num().get_si();
            bool invert = ex < 0;
            if (invert) {
                if (*a == 0) return std::nullopt;
                ex = -ex;
            }
            Rational r(1);
            for (long i = 0; i < ex; ++i) r *= *a;
            return invert ? Rational(1 / r) : r;
        }
        default:
            return std::nullopt;
    }
}

/* expr   := term (('+'|'-') term)*
 * term   := factor (('*'|'/') factor | <differential>)*     juxtaposed dt
 * factor := '-' factor | power
 * power  := atom ('^' exponent)*                            left associative
 * atom   := INT | DEC | 't' | 'dt' | 'd' '(' expr ')' | '(' expr ')'
 * An exponent is '-'* followed by an integer or a parenthesized constant
 * that folds to an integer; everything else is a non-integer exponent error.
 */
class Parser {
  public:
    Parser(const std::string& src, size_t base) : lx_(src, base) {}

    ExprPtr parse() {
        ExprPtr e = parse_sum();
        if (lx_.cur().kind != Tok::end)
            throw_usage("syntax error" + at_byte(lx_.cur().pos) + ": unexpected trailing input");
        return e;
    }

  private:
    ExprPtr parse_sum() {
        ExprPtr e = parse_term();
        while (lx_.cur().kind == Tok::plus || lx_.cur().kind == Tok::minus) {
            ExprKind k = lx_.cur().kind == Tok::plus ? ExprKind::add : ExprKind::sub;
            lx_.advance();
            e = node(k, Rational(0), e, parse_term());
        }
        return e;
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_factor();
        while (true) {
            Tok k = lx_.cur().kind;
            if (k == Tok::star || k == Tok::slash) {
                lx_.advance();
                e = node(k == Tok::star ? ExprKind::mul : ExprKind::div, Rational(0), e, parse_factor());
            } else if (k == Tok::dt || k == Tok::diff_d) {
                // "(3/t+5+t) dt": a juxtaposed differential multiplies
                e = node(ExprKind::mul, Rational(0), e, parse_power());
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_factor() {
        if (lx_.cur().kind == Tok::minus) {
            lx_.advance();
            return node(ExprKind::neg, Rational(0), parse_factor(), nullptr);
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr e = parse_atom();
        while (lx_.cur().kind == Tok::caret) {
            size_t cpos = lx_.cur().pos;
            lx_.advance();
            e = node(ExprKind::pow, Rational(0), e, node(ExprKind::int_lit, parse_exponent(cpos), nullptr, nullptr));
        }
        return e;
    }

    Rational parse_exponent(size_t cpos) {
        bool negate = false;
        while (lx_.cur().kind == Tok::minus) {
            negate = !negate;
            lx_.advance();
        }
        Rational v;
        if (lx_.cur().kind == Tok::int_lit) {
            v = lx_.cur().val;
            lx_.advance();
        } else if (lx_.cur().kind == Tok::lparen) {
            lx_.advance();
            ExprPtr inner = parse_sum();
            expect(Tok::rparen, "')'");
            auto f = fold_const(inner);
            if (!f) throw_usage("non-integer exponent" + at_byte(cpos));
            v = *f;
        } else {
            throw_usage("non-integer exponent" + at_byte(lx_.cur().pos));
        }
        if (v.get_den() != 1) throw_usage("non-integer exponent" + at_byte(cpos));
        return negate ? Rational(-v) : v;
    }

    ExprPtr parse_atom() {
        const Token t = lx_.cur();
        switch (t.kind) {
            case Tok::int_lit:
                lx_.advance();
                return node(ExprKind::int_lit, t.val, nullptr, nullptr);
            case Tok::dec_lit:
                lx_.advance();
                return node(ExprKind::rat_lit, t.val, nullptr, nullptr);
            case Tok::var_t:
                lx_.advance();
                return node(ExprKind::var_t, Rational(0), nullptr, nullptr);
            case Tok::dt:
                lx_.advance();
                return node(ExprKind::diff, Rational(0), node(ExprKind::var_t, Rational(0), nullptr, nullptr),
                            nullptr);
            case Tok::diff_d: {
                lx_.advance();
                expect(Tok::lparen, "'(' after d");
                ExprPtr inner = parse_sum();
                expect(Tok::rparen, "')'");
                return node(ExprKind::diff, Rational(0), inner, nullptr);
            }
            case Tok::lparen: {
                lx_.advance();
                ExprPtr inner = parse_sum();
                expect(Tok::rparen, "')'");
                return inner;
            }
            default:
                throw_usage("syntax error" + at_byte(t.pos) + ": expected a value");
        }
    }

    void expect(Tok k, const std::string& what) {
        if (lx_.cur().kind != k)
            throw_usage("syntax error" + at_byte(lx_.cur().pos) + ": expected " + what);
        lx_.advance();
    }

    Lexer lx_;
};

ExprPtr parse_expr_at(const std::string& src, size_t base) { return Parser(src, base).parse(); }

int prec_of(ExprKind k) {
    switch (k) {
        case ExprKind::add:
        case ExprKind::sub:
            return 1;
        case ExprKind::mul:
        case ExprKind::div:
            return 2;
        case ExprKind::neg:
            return 3;
        case ExprKind::pow:
            return 4;
        default:
            return 5;
    }
}

bool negative_literal(const ExprPtr& e) {
    return (e->kind == ExprKind::int_lit || e->kind == ExprKind::rat_lit) && e->value < 0;
}

std::string dec_str(const Rational& v) {
    Int d = v.get_den();
    long twos = 0, fives = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++twos;
    }
    while (d % 5 == 0) {
        d /= 5;
        ++fives;
    }
    // grammar-generated rat_lits are exact decimals; anything else falls back
    // to the fraction form (which reparses as a div node, not a literal)
    if (d != 1) return rat_to_string(v);
    long k = std::max(twos, fives);
    if (k == 0) return v.get_num().get_str() + ".0";
    Int scaled = v.get_num();
    for (long q = 0; q < k; ++q) scaled *= 10;
    scaled /= v.get_den();
    std::string sign = scaled < 0 ? "-" : "";
    std::string digs = Int(abs(scaled)).get_str();
    while (digs.size() <= (size_t)k) digs.insert(digs.begin(), '0');
    digs.insert(digs.end() - k, '.');
    return sign + digs;
}

std::string wrap(const ExprPtr& e, bool need) { return need ? "(" + render(e) + ")" : render(e); }

// f0 + f1 dt with dt^2 = 0: derivatives and products of 1-forms come out
// right without a separate differential-algebra pass
struct DualRF {
    RationalFunction<Rational> a = rf_zero_q();
    RationalFunction<Rational> b = rf_zero_q();

    static RationalFunction<Rational> rf_zero_q() {
        return {Poly<Rational>{}, make_poly<Rational>({Rational(1)})};
    }
};

RationalFunction<Rational> rf_rat(const Rational& c) {
    return {make_poly<Rational>({c}), make_poly<Rational>({Rational(1)})};
}

RationalFunction<Rational> rf_neg(const RationalFunction<Rational>& f) {
    return {negated(f.num), f.den};
}

RationalFunction<Rational> rf_sub(const RationalFunction<Rational>& x, const RationalFunction<Rational>& y) {
    return x + rf_neg(y);
}

RationalFunction<Rational> rf_derivative(const RationalFunction<Rational>& f) {
    return make_rf(poly_derivative(f.num) * f.den - f.num * poly_derivative(f.den), f.den * f.den);
}

RationalFunction<Rational> rf_pow(const RationalFunction<Rational>& base, long e) {
    RationalFunction<Rational> r = rf_rat(Rational(1));
    bool invert = e < 0;
    if (invert) e = -e;
    for (long i = 0; i < e; ++i) r = r * base;
    return invert ? rf_inv(r) : r;
}

long count_diff(const ExprPtr& e) {
    if (!e) return 0;
    long n = e->kind == ExprKind::diff ? 1 : 0;
    return n + count_diff(e->lhs) + count_diff(e->rhs);
}

DualRF eval_dual(const ExprPtr& e) {
    switch (e->kind) {
        case ExprKind::int_lit:
        case ExprKind::rat_lit:
            return {rf_rat(e->value), DualRF::rf_zero_q()};
        case ExprKind::var_t:
            return {{make_poly<Rational>({Rational(0), Rational(1)}), make_poly<Rational>({Rational(1)})},
                    DualRF::rf_zero_q()};
        case ExprKind::neg: {
            DualRF v = eval_dual(e->lhs);
            return {rf_neg(v.a), rf_neg(v.b)};
        }
        case ExprKind::add:
        case ExprKind::sub: {
            DualRF x = eval_dual(e->lhs), y = eval_dual(e->rhs);
            if (e->kind == ExprKind::add) return {x.a + y.a, x.b + y.b};
            return {rf_sub(x.a, y.a), rf_sub(x.b, y.b)};
        }
        case ExprKind::mul: {
            DualRF x = eval_dual(e->lhs), y = eval_dual(e->rhs);
            return {x.a * y.a, x.a * y.b + x.b * y.a};
        }
        case ExprKind::div: {
            DualRF x = eval_dual(e->lhs), y = eval_dual(e->rhs);
            if (rf_is_zero(y.a)) {
                if (rf_is_zero(y.b)) throw_usage("division by zero");
                throw_usage("cannot divide by a differential");
            }
            RationalFunction<Rational> inv = rf_inv(y.a);
            return {x.a * inv, rf_sub(x.b * y.a, x.a * y.b) * inv * inv};
        }
        case ExprKind::pow: {
            DualRF base = eval_dual(e->lhs);
            if (!rf_is_zero(base.b)) throw_usage("cannot raise a differential to a power");
            const Rational& ev = e->rhs->value;
            if (!ev.get_num().fits_slong_p() || abs(ev.get_num()) > 512)
                throw_usage("exponent magnitude beyond the supported range (512)");
            return {rf_pow(base.a, ev.get_num().get_si()), DualRF::rf_zero_q()};
        }
        case ExprKind::diff: {
            DualRF inner = eval_dual(e->lhs);
            if (!rf_is_zero(inner.b)) throw_usage("nested differential marker");
            return {DualRF::rf_zero_q(), rf_derivative(inner.a)};
        }
    }
    throw_usage("malformed expression node");
}

Rational scan_decimal(const std::string& s, size_t& i) {
    size_t j = i;
    while (j < s.size() && std::isdigit((unsigned char)s[j])) ++j;
    if (j == i) throw_usage("divisor syntax error" + at_byte(i) + ": expected digits");
    Rational v = Rational(Int(s.substr(i, j - i)));
    if (j < s.size() && s[j] == '.') {
        size_t k = j + 1;
        while (k < s.size() && std::isdigit((unsigned char)s[k])) ++k;
        if (k == j + 1)
            throw_usage("divisor syntax error" + at_byte(j) + ": digits required after the decimal point");
        std::string frac = s.substr(j + 1, k - j - 1);
        Int den = 1;
        for (size_t q = 0; q < frac.size(); ++q) den *= 10;
        v += Rational(Int(frac)) / Rational(den);
        j = k;
    }
    i = j;
    return v;
}

// rational parameter of an E<a> token: -? digits (/digits | .digits)?
Rational scan_signed_rational(const std::string& s, size_t& i) {
    bool neg = false;
    if (i < s.size() && s[i] == '-') {
        neg = true;
        ++i;
    }
    size_t j = i;
    while (j < s.size() && std::isdigit((unsigned char)s[j])) ++j;
    if (j == i) throw_usage("divisor syntax error" + at_byte(i) + ": E must carry a rational parameter");
    Rational v;
    if (j < s.size() && s[j] == '/') {
        Int num(s.substr(i, j - i));
        size_t k = j + 1, kk = k;
        while (kk < s.size() && std::isdigit((unsigned char)s[kk])) ++kk;
        if (kk == k) throw_usage("divisor syntax error" + at_byte(k) + ": expected a denominator");
        Int den(s.substr(k, kk - k));
        if (den == 0) throw_usage("divisor syntax error" + at_byte(k) + ": zero denominator");
        v = Rational(num) / Rational(den);
        i = kk;
    } else {
        v = scan_decimal(s, i);
    }
    return neg ? Rational(-v) : v;
}

size_t find_balanced(const std::string& s, size_t open) {
    long depth = 0;
    for (size_t j = open; j < s.size(); ++j) {
        if (s[j] == '(') ++depth;
        else if (s[j] == ')' && --depth == 0) return j;
    }
    throw_usage("divisor syntax error" + at_byte(open) + ": unmatched '('");
}

}  // namespace

ExprPtr parse_expr(const std::string& src) { return parse_expr_at(src, 0); }

std::string render(const ExprPtr& e) {
    if (!e) throw_usage("render of an empty expression");
    switch (e->kind) {
        case ExprKind::int_lit:
            return e->value.get_num().get_str();
        case ExprKind::rat_lit:
            return dec_str(e->value);
        case ExprKind::var_t:
            return "t";
        case ExprKind::diff:
            return e->lhs->kind == ExprKind::var_t ? "dt" : "d(" + render(e->lhs) + ")";
        case ExprKind::neg:
            return "-" + wrap(e->lhs, prec_of(e->lhs->kind) < 3 || negative_literal(e->lhs));
        case ExprKind::pow:
            return wrap(e->lhs, prec_of(e->lhs->kind) < 4 || negative_literal(e->lhs)) + "^" +
                   e->rhs->value.get_num().get_str();
        default: {
            int p = prec_of(e->kind);
            const char* op = e->kind == ExprKind::add ? "+"
                             : e->kind == ExprKind::sub ? "-"
                             : e->kind == ExprKind::mul ? "*"
                                                        : "/";
            return wrap(e->lhs, prec_of(e->lhs->kind) < p || negative_literal(e->lhs)) + op +
                   wrap(e->rhs, prec_of(e->rhs->kind) <= p || negative_literal(e->rhs));
        }
    }
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    if ((a->kind == ExprKind::int_lit || a->kind == ExprKind::rat_lit) && a->value != b->value) return false;
    return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
}

RationalFunction<Rational> eval_expr(const ExprPtr& e) {
    if (count_diff(e) != 0) throw_usage("unexpected differential marker in a function expression");
    return eval_dual(e).a;
}

RationalFunction<Rational> eval_form(const ExprPtr& e) {
    long n = count_diff(e);
    if (n == 0) throw_usage("expected a differential form (no dt in the expression)");
    if (n > 1) throw_usage("more than one differential marker");
    DualRF v = eval_dual(e);
    if (!rf_is_zero(v.a)) throw_usage("expression is not of the shape f(t) dt");
    return v.b;
}

RationalFunction<Rational> parse_function(const std::string& src) { return eval_expr(parse_expr(src)); }

RationalFunction<Rational> parse_form(const std::string& src) { return eval_form(parse_expr(src)); }

DivisorSpec parse_divisor(const std::string& src) {
    DivisorSpec spec;
    size_t i = 0;
    const size_t n = src.size();
    auto skip = [&] {
        while (i < n && std::isspace((unsigned char)src[i])) ++i;
    };

    skip();
    if (i == n) return spec;
    if (src[i] == '0') {  // the zero divisor written literally
        size_t j = i + 1;
        while (j < n && std::isspace((unsigned char)src[j])) ++j;
        if (j == n) return spec;
    }

    bool first = true;
    while (true) {
        skip();
        Rational sign(1);
        if (i < n && (src[i] == '+' || src[i] == '-')) {
            if (src[i] == '-') sign = -1;
            ++i;
            skip();
        } else if (!first) {
            if (i == n) break;
            throw_usage("divisor syntax error" + at_byte(i) + ": expected '+' or '-' between terms");
        }
        if (i == n) throw_usage("divisor syntax error" + at_byte(i) + ": expected a divisor term");

        Rational coeff(1);
        if (std::isdigit((unsigned char)src[i])) {
            coeff = scan_decimal(src, i);
            skip();
            if (i == n || src[i] != '*')
                throw_usage("divisor syntax error" + at_byte(i) + ": expected '*' after the coefficient");
            ++i;
            skip();
        }
        if (i == n) throw_usage("divisor syntax error" + at_byte(i) + ": expected a place token");

        DivisorTerm term;
        term.coeff = Rational(sign * coeff);
        char c = src[i];
        if (c == '(') {
            size_t open = i;
            size_t close = find_balanced(src, i);
            RationalFunction<Rational> f = eval_expr(parse_expr_at(src.substr(open + 1, close - open - 1), open + 1));
            if (f.den.deg() > 0)
                throw_usage("divisor syntax error" + at_byte(open) + ": place polynomial has a denominator");
            if (f.num.is_zero())
                throw_usage("divisor syntax error" + at_byte(open) + ": the zero polynomial is not a place");
            term.place = DivisorTerm::Place::poly;
            term.f = f.num;
            i = close + 1;
        } else if (src.compare(i, 3, "inf") == 0 &&
                   (i + 3 >= n || !std::isalnum((unsigned char)src[i + 3]))) {
            term.place = DivisorTerm::Place::inf;
            i += 3;
        } else if (c == 'V') {
            ++i;
            size_t j = i;
            while (j < n && std::isdigit((unsigned char)src[j])) ++j;
            if (j == i) throw_usage("divisor syntax error" + at_byte(i) + ": V must name a fiber prime");
            Int pv(src.substr(i, j - i));
            if (!pv.fits_slong_p() || !is_prime(pv.get_si()))
                throw_usage("divisor syntax error" + at_byte(i) + ": V" + pv.get_str() + ": not a prime");
            term.place = DivisorTerm::Place::vert;
            term.p = pv.get_si();
            i = j;
        } else if (c == 'E') {
            ++i;
            if (src.compare(i, 3, "inf") == 0 && (i + 3 >= n || !std::isalnum((unsigned char)src[i + 3]))) {
                term.place = DivisorTerm::Place::horiz_inf;
                i += 3;
            } else {
                term.place = DivisorTerm::Place::horiz;
                term.a = scan_signed_rational(src, i);
            }
        } else {
            throw_usage("divisor syntax error" + at_byte(i) + ": unknown place token");
        }
        spec.terms.push_back(std::move(term));
        first = false;
        skip();
        if (i == n) break;
    }
    return spec;
}

std::string poly_pretty(const Poly<Rational>& f, const std::string& var) {
    if (f.is_zero()) return "0";
    std::string s;
    for (long k = f.deg(); k >= 0; --k) {
        const Rational& c = f.c[(size_t)k];
        if (c == 0) continue;
        bool neg = c < 0;
        Rational m = neg ? Rational(-c) : c;
        s += s.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
        bool unit = m == 1 && k > 0;
        if (!unit) s += rat_to_string(m);
        if (k > 0) {
            if (!unit) s += "*";
            s += var;
            if (k > 1) s += "^" + std::to_string(k);
        }
    }
    return s;
}

std::string poly_pretty(const Poly<Fp>& f, const std::string& var) {
    if (f.is_zero()) return "0";
    std::string s;
    for (long k = f.deg(); k >= 0; --k) {
        long v = f.c[(size_t)k].value();
        if (v == 0) continue;
        if (!s.empty()) s += " + ";
        bool unit = v == 1 && k > 0;
        if (!unit) s += std::to_string(v);
        if (k > 0) {
            if (!unit) s += "*";
            s += var;
            if (k > 1) s += "^" + std::to_string(k);
        }
    }
    return s;
}

}  // namespace adelix
