#include "pppt/digest.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace pppt {

namespace {
Digest sha256(const std::uint8_t* data, std::size_t n) {
    Digest out{};
    unsigned int len = 0;
    if (EVP_Digest(data, n, out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.size()) {
        throw std::runtime_error("sha256 digest failed");
    }
    return out;
}
}  // namespace

Digest compute_digest(const std::vector<std::uint8_t>& bytes) {
    return sha256(bytes.data(), bytes.size());
}

Digest compute_digest(const std::string& text) {
    return sha256(reinterpret_cast<const std::uint8_t*>(text.data()), text.size());
}

Digest provenance_digest(const ProvenanceField& field) {
    return compute_digest(serialize_provenance(field));
}

void refresh_digest(DataPacket& pkt) { pkt.digest = provenance_digest(pkt.provenance); }

bool digest_ok(const DataPacket& pkt) {
    if (pkt.provenance.absent()) return false;
    return pkt.digest == provenance_digest(pkt.provenance);
}

}  // namespace pppt
