#include "spacdc/ecc.hpp"

#include <sstream>
#include <stdexcept>

#include "spacdc/errors.hpp"
#include "spacdc/rng.hpp"

namespace spacdc {

namespace {

BigInt mod(const BigInt& v, const BigInt& q) {
    BigInt r;
    mpz_mod(r.get_mpz_t(), v.get_mpz_t(), q.get_mpz_t());  // result in [0, q)
    return r;
}

BigInt mod_inverse(const BigInt& v, const BigInt& q) {
    BigInt r;
    if (mpz_invert(r.get_mpz_t(), v.get_mpz_t(), q.get_mpz_t()) == 0) {
        throw std::invalid_argument("ecc: " + v.get_str() + " not invertible mod " +
                                    q.get_str());
    }
    return r;
}

void require_on_curve(const CurvePoint& p, const CurveParams& curve, const char* who) {
    if (!curve.contains(p)) {
        throw std::invalid_argument(std::string(who) + ": point not on curve");
    }
}

}  // namespace

bool operator==(const CurvePoint& a, const CurvePoint& b) {
    if (a.infinity || b.infinity) return a.infinity == b.infinity;
    return a.x == b.x && a.y == b.y;
}

bool CurveParams::contains(const CurvePoint& p) const {
    if (p.infinity) return true;
    if (p.x < 0 || p.x >= q || p.y < 0 || p.y >= q) return false;
    const BigInt lhs = mod(p.y * p.y, q);
    const BigInt rhs = mod(p.x * p.x * p.x + a * p.x + b, q);
    return lhs == rhs;
}

void CurveParams::validate() const {
    if (q < 2) throw ConfigError("curve: modulus must be >= 2");
    if (mod(4 * a * a * a + 27 * b * b, q) == 0) {
        throw ConfigError("curve: discriminant is zero (4a^3 + 27b^2 = 0 mod q)");
    }
    if (g.infinity || !contains(g)) {
        throw ConfigError("curve: generator not on curve");
    }
}

CurveParams toy_curve() {
    CurveParams c;
    c.q = 17;
    c.a = 2;
    c.b = 2;
    c.g = CurvePoint::affine(5, 1);
    c.n = 19;
    return c;
}

CurveParams secp256k1_curve() {
    CurveParams c;
    c.q = BigInt("0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFC2F");
    c.a = 0;
    c.b = 7;
    c.g = CurvePoint::affine(
        BigInt("0x79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798"),
        BigInt("0x483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8"));
    c.n = BigInt("0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141");
    return c;
}

CurvePoint point_negate(const CurvePoint& p, const CurveParams& curve) {
    if (p.infinity) return p;
    return CurvePoint::affine(p.x, mod(-p.y, curve.q));
}

CurvePoint point_add(const CurvePoint& p, const CurvePoint& q, const CurveParams& curve) {
    require_on_curve(p, curve, "point_add");
    require_on_curve(q, curve, "point_add");
    if (p.infinity) return q;
    if (q.infinity) return p;
    if (p.x == q.x && mod(p.y + q.y, curve.q) == 0) {
        return CurvePoint::at_infinity();  // q = -p, includes the y = 0 tangent
    }
    BigInt lambda;
    if (p.x == q.x && p.y == q.y) {
        lambda = mod((3 * p.x * p.x + curve.a) * mod_inverse(2 * p.y, curve.q), curve.q);
    } else {
        lambda = mod((q.y - p.y) * mod_inverse(mod(q.x - p.x, curve.q), curve.q), curve.q);
    }
    const BigInt x3 = mod(lambda * lambda - p.x - q.x, curve.q);
    const BigInt y3 = mod(lambda * (p.x - x3) - p.y, curve.q);
    return CurvePoint::affine(x3, y3);
}

CurvePoint scalar_mul(const BigInt& i, const CurvePoint& p, const CurveParams& curve) {
    if (i < 0) throw std::invalid_argument("scalar_mul: scalar must be >= 0");
    require_on_curve(p, curve, "scalar_mul");
    CurvePoint result = CurvePoint::at_infinity();
    CurvePoint addend = p;
    const std::size_t bits = mpz_sizeinbase(i.get_mpz_t(), 2);
    for (std::size_t bit = 0; bit < bits && i != 0; ++bit) {
        if (mpz_tstbit(i.get_mpz_t(), bit)) result = point_add(result, addend, curve);
        if (bit + 1 < bits) addend = point_add(addend, addend, curve);
    }
    return result;
}

BigInt random_below(std::mt19937_64& rng, const BigInt& bound) {
    if (bound <= 0) throw std::invalid_argument("random_below: bound must be positive");
    const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    const std::size_t words = (bits + 63) / 64;
    std::vector<std::uint64_t> buf(words);
    while (true) {
        for (auto& w : buf) w = rng();
        // Trim to the bound's bit length so the rejection rate stays < 1/2.
        const unsigned top_bits = bits % 64;
        if (top_bits != 0) buf.back() &= (~0ULL >> (64 - top_bits));
        BigInt v;
        mpz_import(v.get_mpz_t(), words, -1 /*lsw first*/, sizeof(std::uint64_t),
                   0 /*native endian*/, 0, buf.data());
        if (v < bound) return v;
    }
}

KeyPair keygen(const CurveParams& curve, std::mt19937_64& rng) {
    const BigInt bound = curve.n != 0 ? curve.n : curve.q;
    KeyPair kp;
    kp.sk = 1 + random_below(rng, bound - 1);  // uniform in [1, bound)
    kp.pk = scalar_mul(kp.sk, curve.g, curve);
    return kp;
}

KeyPair keygen(const CurveParams& curve, std::uint64_t seed) {
    auto rng = make_rng(seed, "keygen");
    return keygen(curve, rng);
}

CurvePoint derive_shared(const BigInt& sk_own, const CurvePoint& pk_peer,
                         const CurveParams& curve) {
    require_on_curve(pk_peer, curve, "derive_shared");
    CurvePoint shared = scalar_mul(sk_own, pk_peer, curve);
    if (shared.infinity) {
        throw ProtocolError("derive_shared: degenerate peer key (shared point at infinity)");
    }
    return shared;
}

BigInt random_ephemeral(std::mt19937_64& rng, const CurveParams& curve) {
    // Uniform in (1, q): 2 + [0, q-2).
    return 2 + random_below(rng, curve.q - 2);
}

CipherMatrix mea_encrypt(const QuantizedMatrix& m, const CurvePoint& pk_recipient,
                         const BigInt& k, const CurveParams& curve) {
    if (k <= 1 || k >= curve.q) {
        throw std::invalid_argument("mea_encrypt: ephemeral k must satisfy 1 < k < q");
    }
    require_on_curve(pk_recipient, curve, "mea_encrypt");
    const CurvePoint shared = scalar_mul(k, pk_recipient, curve);
    if (shared.infinity) {
        throw ProtocolError("mea_encrypt: k*pk is the point at infinity");
    }
    const BigInt mask = shared.x;  // psi(x, y) = x

    CipherMatrix c;
    c.ephemeral = scalar_mul(k, curve.g, curve);
    c.rows = m.rows;
    c.cols = m.cols;
    c.scale_bits = m.scale_bits;
    c.entries.reserve(m.entries.size());
    for (std::size_t i = 0; i < m.entries.size(); ++i) {
        const std::int64_t e = m.entries[i];
        BigInt v(static_cast<long>(e));
        if (4 * abs(v) >= curve.q) {  // |e| < q/4 headroom
            std::ostringstream msg;
            msg << "mea_encrypt: entry (" << i / m.cols << "," << i % m.cols << ") = " << e
                << " exceeds the q/4 headroom of modulus " << curve.q.get_str();
            throw std::range_error(msg.str());
        }
        if (v < 0) v += curve.q;
        c.entries.push_back(mod(v + mask, curve.q));
    }
    return c;
}

QuantizedMatrix mea_decrypt(const CipherMatrix& c, const BigInt& sk_recipient,
                            const CurveParams& curve) {
    if (c.ephemeral.infinity) {
        throw ProtocolError("mea_decrypt: ephemeral point is at infinity");
    }
    require_on_curve(c.ephemeral, curve, "mea_decrypt");
    if (c.entries.size() != c.rows * c.cols) {
        throw ProtocolError("mea_decrypt: entry count does not match shape");
    }
    const CurvePoint shared = scalar_mul(sk_recipient, c.ephemeral, curve);
    if (shared.infinity) {
        throw ProtocolError("mea_decrypt: sk * ephemeral is the point at infinity");
    }
    const BigInt mask = shared.x;
    const BigInt half = curve.q / 2;

    QuantizedMatrix m;
    m.rows = c.rows;
    m.cols = c.cols;
    m.scale_bits = c.scale_bits;
    m.entries.reserve(c.entries.size());
    for (const BigInt& masked : c.entries) {
        BigInt v = mod(masked - mask, curve.q);
        if (v > half) v -= curve.q;  // re-center to the signed range
        m.entries.push_back(mpz_get_si(v.get_mpz_t()));
    }
    return m;
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_field(std::vector<std::uint8_t>& out, const BigInt& v) {
    if (v < 0) throw ProtocolError("cipher serialize: negative field");
    std::size_t count = 0;
    std::vector<std::uint8_t> buf((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8);
    if (v != 0) {
        mpz_export(buf.data(), &count, 1 /*msb first*/, 1, 1, 0, v.get_mpz_t());
    }
    put_u32(out, static_cast<std::uint32_t>(count));
    out.insert(out.end(), buf.begin(), buf.begin() + count);
}

class FieldReader {
public:
    explicit FieldReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

    BigInt next(const char* what) {
        if (at_ + 4 > bytes_.size()) {
            throw ProtocolError(std::string("cipher parse: truncated length of ") + what);
        }
        const std::uint32_t len = (std::uint32_t(bytes_[at_]) << 24) |
                                  (std::uint32_t(bytes_[at_ + 1]) << 16) |
                                  (std::uint32_t(bytes_[at_ + 2]) << 8) |
                                  std::uint32_t(bytes_[at_ + 3]);
        at_ += 4;
        if (at_ + len > bytes_.size()) {
            throw ProtocolError(std::string("cipher parse: truncated payload of ") + what);
        }
        BigInt v{0};
        if (len > 0) {
            mpz_import(v.get_mpz_t(), len, 1, 1, 1, 0, bytes_.data() + at_);
        }
        at_ += len;
        return v;
    }

    bool done() const { return at_ == bytes_.size(); }

private:
    const std::vector<std::uint8_t>& bytes_;
    std::size_t at_ = 0;
};

std::size_t to_size(const BigInt& v, const char* what) {
    if (v < 0 || !v.fits_ulong_p()) {
        throw ProtocolError(std::string("cipher parse: bad ") + what);
    }
    return static_cast<std::size_t>(v.get_ui());
}

}  // namespace

std::vector<std::uint8_t> serialize_cipher(const CipherMatrix& c) {
    if (c.ephemeral.infinity) {
        throw ProtocolError("cipher serialize: ephemeral point is at infinity");
    }
    std::vector<std::uint8_t> out;
    put_field(out, c.ephemeral.x);
    put_field(out, c.ephemeral.y);
    put_field(out, BigInt(c.scale_bits));
    put_field(out, BigInt(static_cast<unsigned long>(c.rows)));
    put_field(out, BigInt(static_cast<unsigned long>(c.cols)));
    for (const BigInt& e : c.entries) put_field(out, e);
    return out;
}

CipherMatrix parse_cipher(const std::vector<std::uint8_t>& bytes) {
    FieldReader reader(bytes);
    CipherMatrix c;
    const BigInt x = reader.next("ephemeral.x");
    const BigInt y = reader.next("ephemeral.y");
    c.ephemeral = CurvePoint::affine(x, y);
    c.scale_bits = static_cast<int>(to_size(reader.next("scale_bits"), "scale_bits"));
    c.rows = to_size(reader.next("rows"), "rows");
    c.cols = to_size(reader.next("cols"), "cols");
    const std::size_t count = c.rows * c.cols;
    if (c.rows != 0 && count / c.rows != c.cols) {
        throw ProtocolError("cipher parse: shape overflow");
    }
    // Every entry carries at least its 4-byte length prefix.
    if (count > bytes.size() / 4) {
        throw ProtocolError("cipher parse: entry count exceeds payload");
    }
    c.entries.reserve(count);
    for (std::size_t i = 0; i < count; ++i) c.entries.push_back(reader.next("entry"));
    if (!reader.done()) throw ProtocolError("cipher parse: trailing bytes");
    return c;
}

}  // namespace spacdc
