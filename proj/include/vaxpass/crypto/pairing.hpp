#pragma once

#include <gmpxx.h>

#include "vaxpass/core/bytes.hpp"
#include "vaxpass/crypto/drbg.hpp"

// Symmetric (Type-A) bilinear pairing on the supersingular curve
// E: y^2 = x^3 + x over F_q, q = 3 mod 4, with #E(F_q) = q + 1 = h * r.
// G1 is the order-r subgroup of E(F_q); GT is the order-r subgroup of
// F_{q^2}^* with F_{q^2} = F_q[i]/(i^2 + 1). The pairing is the reduced Tate
// pairing composed with the distortion map (x, y) -> (-x, i*y).
namespace vaxpass::crypto::pairing {

struct CurveParams {
    mpz_class q;  // field prime, 512 bits
    mpz_class r;  // group order, 160 bits
    mpz_class h;  // cofactor, (q + 1) / r
};

const CurveParams& params();

/// Element a + b*i of F_{q^2}.
struct Fq2 {
    mpz_class a;
    mpz_class b;

    static Fq2 one() { return {1, 0}; }
    bool operator==(const Fq2&) const = default;
};

Fq2 mul(const Fq2& x, const Fq2& y);
Fq2 square(const Fq2& x);
Fq2 inverse(const Fq2& x);
Fq2 conjugate(const Fq2& x);
Fq2 pow(const Fq2& base, const mpz_class& exp);

struct G1 {
    mpz_class x;
    mpz_class y;
    bool infinity = true;

    static G1 identity() { return {}; }
    bool operator==(const G1& o) const {
        return infinity == o.infinity && (infinity || (x == o.x && y == o.y));
    }
};

const G1& generator();
/// e(generator, generator), cached.
const Fq2& gt_generator();

bool on_curve(const G1& p);
G1 negate(const G1& p);
G1 add(const G1& p, const G1& q);
G1 mul(const G1& p, const mpz_class& k);

Fq2 pair(const G1& p, const G1& q);

/// Uniform scalar in [1, r - 1].
mpz_class random_scalar(Drbg& rng);
/// Inverse modulo r; k must be non-zero mod r.
mpz_class scalar_inverse(const mpz_class& k);

constexpr std::size_t field_bytes = 64;
constexpr std::size_t scalar_bytes = 20;

Bytes encode_scalar(const mpz_class& k);
/// Throws DecodeError unless the encoding is 20 bytes and in [1, r - 1].
mpz_class decode_scalar(ByteView b);

/// 128 bytes, x || y big-endian. The identity encodes as all zeros.
Bytes encode_g1(const G1& p);
/// Throws DecodeError for bad length, off-curve points or points outside G1.
G1 decode_g1(ByteView b);

/// 128 bytes, a || b big-endian.
Bytes encode_gt(const Fq2& x);
/// Throws DecodeError for bad length or coordinates >= q.
Fq2 decode_gt(ByteView b);

}  // namespace vaxpass::crypto::pairing
