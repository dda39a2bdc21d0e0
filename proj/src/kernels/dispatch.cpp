#include <cstdlib>
#include <stdexcept>
#include <string>

#include "dicke/kernels.hpp"

namespace dicke::kernels {

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar:
            return "scalar";
        case Isa::avx2:
            return "avx2";
        case Isa::neon:
            return "neon";
    }
    return "unknown";
}

namespace {

const KernelTable* lookup(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar:
            return &scalar_table();
        case Isa::avx2:
            return detail::avx2_table();
        case Isa::neon:
            return detail::neon_table();
    }
    return nullptr;
}

const KernelTable& select() noexcept {
    if (const char* env = std::getenv("DICKE_ISA")) {
        const std::string_view want(env);
        for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
            if (want == isa_name(isa)) {
                const KernelTable* t = lookup(isa);
                return t ? *t : scalar_table();
            }
        }
    }
    if (const KernelTable* t = detail::avx2_table()) return *t;
    if (const KernelTable* t = detail::neon_table()) return *t;
    return scalar_table();
}

}  // namespace

bool isa_available(Isa isa) noexcept { return lookup(isa) != nullptr; }

const KernelTable& table_for(Isa isa) {
    const KernelTable* t = lookup(isa);
    if (!t) {
        throw std::invalid_argument("kernel variant '" + std::string(isa_name(isa)) +
                                    "' is not available on this CPU/build");
    }
    return *t;
}

const KernelTable& active() noexcept {
    static const KernelTable& table = select();
    return table;
}

}  // namespace dicke::kernels
