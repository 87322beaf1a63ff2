/*
 * SHA-256 digest over the serialized provenance field.  The digest rides in
 * the packet next to the provenance but is not counted as provenance bytes;
 * the root recomputes it on delivery to detect tampering.
 */
#ifndef PPPT_DIGEST_HPP
#define PPPT_DIGEST_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pppt/types.hpp"

namespace pppt {

/* SHA-256 of an arbitrary byte string. */
Digest compute_digest(const std::vector<std::uint8_t>& bytes);
Digest compute_digest(const std::string& text);

/* Serializes the field and digests it; throws for absent provenance. */
Digest provenance_digest(const ProvenanceField& field);

/* Recomputes and stores the packet digest after a provenance update. */
void refresh_digest(DataPacket& pkt);

/* True when the stored digest matches the current provenance bytes. */
bool digest_ok(const DataPacket& pkt);

}  // namespace pppt

#endif
