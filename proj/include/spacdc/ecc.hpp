#ifndef SPACDC_ECC_HPP
#define SPACDC_ECC_HPP

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "spacdc/matrix.hpp"

namespace spacdc {

using BigInt = mpz_class;

/// Affine point on a short-Weierstrass curve, or the point at infinity.
struct CurvePoint {
    bool infinity = true;
    BigInt x{0};
    BigInt y{0};

    static CurvePoint at_infinity() { return {}; }
    static CurvePoint affine(BigInt px, BigInt py) {
        return CurvePoint{false, std::move(px), std::move(py)};
    }
};

bool operator==(const CurvePoint& a, const CurvePoint& b);
inline bool operator!=(const CurvePoint& a, const CurvePoint& b) { return !(a == b); }

/// y^2 = x^3 + ax + b over the prime field F_q, with generator g and group
/// order n (n = 0 means unknown; key sampling then falls back to q).
struct CurveParams {
    BigInt q;
    BigInt a;
    BigInt b;
    CurvePoint g;
    BigInt n{0};

    bool contains(const CurvePoint& p) const;
    void validate() const;  // nonzero discriminant, generator on curve
};

/// 19-element curve y^2 = x^3 + 2x + 2 mod 17, generator (5,1). Small enough
/// for exhaustive group-law checks.
CurveParams toy_curve();
/// secp256k1 profile for realistic runs.
CurveParams secp256k1_curve();

CurvePoint point_negate(const CurvePoint& p, const CurveParams& curve);
CurvePoint point_add(const CurvePoint& p, const CurvePoint& q, const CurveParams& curve);
/// Double-and-add; O(log i) group operations. i must be >= 0.
CurvePoint scalar_mul(const BigInt& i, const CurvePoint& p, const CurveParams& curve);

struct KeyPair {
    BigInt sk;
    CurvePoint pk;
};

/// Uniform integer in [0, bound) by rejection sampling on rng words.
BigInt random_below(std::mt19937_64& rng, const BigInt& bound);

KeyPair keygen(const CurveParams& curve, std::uint64_t seed);
KeyPair keygen(const CurveParams& curve, std::mt19937_64& rng);

/// ECDH share point sk_own * pk_peer. Throws ProtocolError when the result
/// degenerates to infinity (unusable peer key).
CurvePoint derive_shared(const BigInt& sk_own, const CurvePoint& pk_peer,
                         const CurveParams& curve);

/// MEA-ECC ciphertext: ephemeral point k*G plus the masked integer matrix.
/// Every entry carries the same additive mask psi(k*pk) mod q, where psi is
/// the x-coordinate.
struct CipherMatrix {
    CurvePoint ephemeral;
    std::size_t rows = 0;
    std::size_t cols = 0;
    int scale_bits = 0;
    std::vector<BigInt> entries;  // in [0, q)
};

/// Encrypts the integer view of a matrix. Signed entries are lifted into
/// [0, q); they must satisfy |e| < q/4 so the signed re-centering on decrypt
/// is unambiguous. Requires 1 < k < q, fresh per message.
CipherMatrix mea_encrypt(const QuantizedMatrix& m, const CurvePoint& pk_recipient,
                         const BigInt& k, const CurveParams& curve);

/// Inverse of mea_encrypt under the matching secret key. There is no
/// authentication: a wrong key yields garbage rather than an error.
QuantizedMatrix mea_decrypt(const CipherMatrix& c, const BigInt& sk_recipient,
                            const CurveParams& curve);

/// Draws an ephemeral scalar uniform in (1, q) suitable for mea_encrypt.
BigInt random_ephemeral(std::mt19937_64& rng, const CurveParams& curve);

// Wire form: consecutive length-prefixed fields (u32 big-endian length, then
// that many bytes of unsigned big-endian integer): ephemeral.x, ephemeral.y,
// scale_bits, rows, cols, then the row-major masked entries.
std::vector<std::uint8_t> serialize_cipher(const CipherMatrix& c);
CipherMatrix parse_cipher(const std::vector<std::uint8_t>& bytes);

}  // namespace spacdc

#endif
