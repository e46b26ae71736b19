#include "iup/core/types.hpp"

#include <charconv>

namespace iup {

IpAddr IpAddr::parse(const std::string& dotted) {
    std::uint32_t value = 0;
    const char* p = dotted.data();
    const char* end = p + dotted.size();
    for (int octet = 0; octet < 4; ++octet) {
        unsigned v = 0;
        auto [next, ec] = std::from_chars(p, end, v);
        if (ec != std::errc() || v > 255) {
            throw std::invalid_argument("bad IPv4 address: " + dotted);
        }
        value = (value << 8) | v;
        p = next;
        if (octet < 3) {
            if (p == end || *p != '.') {
                throw std::invalid_argument("bad IPv4 address: " + dotted);
            }
            ++p;
        }
    }
    if (p != end) {
        throw std::invalid_argument("bad IPv4 address: " + dotted);
    }
    return IpAddr{value};
}

std::string IpAddr::to_string() const {
    return std::to_string((value >> 24) & 0xff) + "." + std::to_string((value >> 16) & 0xff) +
           "." + std::to_string((value >> 8) & 0xff) + "." + std::to_string(value & 0xff);
}

ServiceClass dscp_service_class(int codepoint) {
    if (codepoint < 0 || codepoint > 63) {
        throw std::out_of_range("dscp codepoint out of range: " + std::to_string(codepoint));
    }
    switch (codepoint) {
        case 8: return ServiceClass::LowPriority;     // CS1
        case 10: return ServiceClass::LowLatency;     // AF11
        case 18: return ServiceClass::HighThroughput; // AF21
        default: return ServiceClass::Unclassified;
    }
}

const char* to_string(ServiceClass c) {
    switch (c) {
        case ServiceClass::LowPriority: return "low-priority";
        case ServiceClass::LowLatency: return "low-latency";
        case ServiceClass::HighThroughput: return "high-throughput";
        default: return "unclassified";
    }
}

}  // namespace iup
