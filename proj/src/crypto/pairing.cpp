#include "vaxpass/crypto/pairing.hpp"

#include <algorithm>

#include "vaxpass/core/errors.hpp"

namespace vaxpass::crypto::pairing {

namespace {

// Generated offline: r = nextprime of a hashed 160-bit seed, h a multiple of
// 12 (so q = h*r - 1 = 3 mod 4), stepped until q is prime. Primality of both
// is re-checked by the unit tests.
constexpr const char* q_hex =
    "9a9aaa723808a9a772a574c0cb02b8a2c670166bb8566afee94fbc530214555a"
    "d9a8470b9306157218b894827a8cc47467e784471b324cbfce24e7663c56eb03";
constexpr const char* r_hex = "ce51e632b83980120bf46ee44eb6216db9595153";
constexpr const char* h_hex =
    "bfd4df2fa64b410ec0d7a780ce2b4ba71e102c14ecccfd1c152a1a02ed22b8ea"
    "903d710e8d066dc9c215746c";

const mpz_class& Q() { return params().q; }

mpz_class fmod(const mpz_class& v) {
    mpz_class out;
    mpz_mod(out.get_mpz_t(), v.get_mpz_t(), Q().get_mpz_t());
    return out;
}

mpz_class finv(const mpz_class& v) {
    mpz_class out;
    if (mpz_invert(out.get_mpz_t(), v.get_mpz_t(), Q().get_mpz_t()) == 0) {
        throw std::domain_error("inverse of zero in F_q");
    }
    return out;
}

mpz_class fpow(const mpz_class& base, const mpz_class& exp) {
    mpz_class out;
    mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), Q().get_mpz_t());
    return out;
}

void write_be(Bytes& out, const mpz_class& v, std::size_t width) {
    std::size_t count = 0;
    Bytes tmp((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8 + 1);
    mpz_export(tmp.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
    tmp.resize(count);
    if (tmp.size() > width) throw std::logic_error("field element wider than encoding");
    out.insert(out.end(), width - tmp.size(), 0);
    append(out, tmp);
}

mpz_class read_be(ByteView b) {
    mpz_class v;
    mpz_import(v.get_mpz_t(), b.size(), 1, 1, 1, 0, b.data());
    return v;
}

// Line through the Miller-loop point T with slope lambda, evaluated at the
// distorted point (-xq, i*yq). Only the numerator is kept: vertical lines take
// values in F_q and vanish under the final exponentiation.
Fq2 line_at(const mpz_class& lambda, const G1& t, const G1& q) {
    return {fmod(lambda * (q.x + t.x) - t.y), q.y};
}

}  // namespace

const CurveParams& params() {
    static const CurveParams p = [] {
        CurveParams out;
        out.q.set_str(q_hex, 16);
        out.r.set_str(r_hex, 16);
        out.h.set_str(h_hex, 16);
        return out;
    }();
    return p;
}

Fq2 mul(const Fq2& x, const Fq2& y) {
    mpz_class ac = x.a * y.a;
    mpz_class bd = x.b * y.b;
    mpz_class cross = (x.a + x.b) * (y.a + y.b) - ac - bd;
    return {fmod(ac - bd), fmod(cross)};
}

Fq2 square(const Fq2& x) {
    return {fmod((x.a + x.b) * (x.a - x.b)), fmod(2 * x.a * x.b)};
}

Fq2 inverse(const Fq2& x) {
    mpz_class norm_inv = finv(fmod(x.a * x.a + x.b * x.b));
    return {fmod(x.a * norm_inv), fmod(-x.b * norm_inv)};
}

Fq2 conjugate(const Fq2& x) {
    return {x.a, fmod(-x.b)};
}

Fq2 pow(const Fq2& base, const mpz_class& exp) {
    Fq2 result = Fq2::one();
    for (auto bit = static_cast<long>(mpz_sizeinbase(exp.get_mpz_t(), 2)) - 1; bit >= 0; --bit) {
        result = square(result);
        if (mpz_tstbit(exp.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) result = mul(result, base);
    }
    return result;
}

bool on_curve(const G1& p) {
    if (p.infinity) return true;
    if (p.x < 0 || p.x >= Q() || p.y < 0 || p.y >= Q()) return false;
    return fmod(p.y * p.y - p.x * p.x * p.x - p.x) == 0;
}

G1 negate(const G1& p) {
    if (p.infinity) return p;
    return {p.x, fmod(-p.y), false};
}

G1 add(const G1& p, const G1& q) {
    if (p.infinity) return q;
    if (q.infinity) return p;
    mpz_class lambda;
    if (p.x == q.x) {
        if (fmod(p.y + q.y) == 0) return G1::identity();
        lambda = fmod((3 * p.x * p.x + 1) * finv(2 * p.y));
    } else {
        lambda = fmod((q.y - p.y) * finv(fmod(q.x - p.x)));
    }
    mpz_class x3 = fmod(lambda * lambda - p.x - q.x);
    mpz_class y3 = fmod(lambda * (p.x - x3) - p.y);
    return {x3, y3, false};
}

G1 mul(const G1& p, const mpz_class& k) {
    mpz_class e = k;
    if (e < 0) return mul(negate(p), -e);
    G1 acc = G1::identity();
    for (auto bit = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1; bit >= 0; --bit) {
        acc = add(acc, acc);
        if (mpz_tstbit(e.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) acc = add(acc, p);
    }
    return acc;
}

const G1& generator() {
    static const G1 g = [] {
        // Hash-and-increment onto the curve, then clear the cofactor.
        mpz_class x = read_be(hash(std::string_view("vaxpass-g1-generator")).bytes) % Q();
        const mpz_class sqrt_exp = (Q() + 1) / 4;
        const mpz_class euler_exp = (Q() - 1) / 2;
        for (;; x = fmod(x + 1)) {
            mpz_class rhs = fmod(x * x * x + x);
            if (rhs == 0 || fpow(rhs, euler_exp) != 1) continue;
            G1 candidate{x, fpow(rhs, sqrt_exp), false};
            G1 g1 = mul(candidate, params().h);
            if (!g1.infinity) return g1;
        }
    }();
    return g;
}

Fq2 pair(const G1& p, const G1& q) {
    if (p.infinity || q.infinity) return Fq2::one();

    const mpz_class& r = params().r;
    Fq2 f = Fq2::one();
    G1 t = p;
    for (auto bit = static_cast<long>(mpz_sizeinbase(r.get_mpz_t(), 2)) - 2; bit >= 0; --bit) {
        // doubling step; T has odd order so y_T != 0
        mpz_class lambda = fmod((3 * t.x * t.x + 1) * finv(2 * t.y));
        f = mul(square(f), line_at(lambda, t, q));
        t = add(t, t);

        if (mpz_tstbit(r.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) {
            if (t.x == p.x) {
                // T = -P: the chord is vertical, contributes an F_q factor only
                t = add(t, p);
            } else {
                mpz_class slope = fmod((p.y - t.y) * finv(fmod(p.x - t.x)));
                f = mul(f, line_at(slope, t, q));
                t = add(t, p);
            }
        }
    }

    // final exponentiation by (q^2 - 1) / r = (q - 1) * h; Frobenius is conjugation
    Fq2 g = mul(conjugate(f), inverse(f));
    return pow(g, params().h);
}

const Fq2& gt_generator() {
    static const Fq2 z = pair(generator(), generator());
    return z;
}

mpz_class random_scalar(Drbg& rng) {
    const mpz_class& r = params().r;
    for (;;) {
        // 32 bytes against a 160-bit modulus keeps the reduction bias negligible
        mpz_class k = read_be(rng.bytes(32)) % r;
        if (k != 0) return k;
    }
}

mpz_class scalar_inverse(const mpz_class& k) {
    mpz_class out;
    if (mpz_invert(out.get_mpz_t(), k.get_mpz_t(), params().r.get_mpz_t()) == 0) {
        fail(ErrorKind::InvalidArgument, "scalar has no inverse mod r");
    }
    return out;
}

Bytes encode_scalar(const mpz_class& k) {
    Bytes out;
    write_be(out, k, scalar_bytes);
    return out;
}

mpz_class decode_scalar(ByteView b) {
    require(b.size() == scalar_bytes, ErrorKind::DecodeError, "scalar must be 20 bytes");
    mpz_class k = read_be(b);
    require(k > 0 && k < params().r, ErrorKind::DecodeError, "scalar out of range");
    return k;
}

Bytes encode_g1(const G1& p) {
    Bytes out;
    out.reserve(2 * field_bytes);
    if (p.infinity) {
        out.assign(2 * field_bytes, 0);
        return out;
    }
    write_be(out, p.x, field_bytes);
    write_be(out, p.y, field_bytes);
    return out;
}

G1 decode_g1(ByteView b) {
    require(b.size() == 2 * field_bytes, ErrorKind::DecodeError, "G1 point must be 128 bytes");
    if (std::all_of(b.begin(), b.end(), [](auto v) { return v == 0; })) return G1::identity();
    G1 p{read_be(b.first(field_bytes)), read_be(b.subspan(field_bytes)), false};
    require(on_curve(p), ErrorKind::DecodeError, "point is not on the curve");
    require(mul(p, params().r).infinity, ErrorKind::DecodeError, "point is outside the prime-order subgroup");
    return p;
}

Bytes encode_gt(const Fq2& x) {
    Bytes out;
    out.reserve(2 * field_bytes);
    write_be(out, x.a, field_bytes);
    write_be(out, x.b, field_bytes);
    return out;
}

Fq2 decode_gt(ByteView b) {
    require(b.size() == 2 * field_bytes, ErrorKind::DecodeError, "GT element must be 128 bytes");
    Fq2 x{read_be(b.first(field_bytes)), read_be(b.subspan(field_bytes))};
    require(x.a < Q() && x.b < Q(), ErrorKind::DecodeError, "GT coordinate out of range");
    return x;
}

}  // namespace vaxpass::crypto::pairing
