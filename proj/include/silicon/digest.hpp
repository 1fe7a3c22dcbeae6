#pragma once

// SHA-256 digests for cache keys and artifact provenance.

#include <cstdio>
#include <string>
#include <string_view>

#include <openssl/evp.h>

namespace silicon::digest {

inline std::string sha256_hex(std::string_view data) {
    unsigned char hash[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    EVP_DigestUpdate(ctx, data.data(), data.size());
    EVP_DigestFinal_ex(ctx, hash, &length);
    EVP_MD_CTX_free(ctx);
    std::string hex;
    hex.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        char buf[3];
        std::snprintf(buf, sizeof(buf), "%02x", hash[i]);
        hex += buf;
    }
    return hex;
}

inline std::string sha256_hex_short(std::string_view data, std::size_t chars = 16) {
    return sha256_hex(data).substr(0, chars);
}

}  // namespace silicon::digest
