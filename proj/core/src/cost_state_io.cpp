#include <cstring>
#include <fstream>

#include "rltqap/cost_state.hpp"

namespace rltqap {

namespace {

constexpr char kMagic[4] = {'R', 'L', 'T', 'S'};
constexpr std::uint8_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw TruncatedPayload("checkpoint truncated");
    return v;
}

template <typename Scalar>
void write_impl(const std::string& path, const CostState<Scalar>& st) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open checkpoint for writing: " + path);
    out.write(kMagic, 4);
    put<std::uint8_t>(out, kVersion);
    put<std::uint8_t>(out, static_cast<std::uint8_t>(CostState<Scalar>::precision_bits()));
    put<std::uint8_t>(out, static_cast<std::uint8_t>(st.level));
    put<std::uint8_t>(out, 0);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(st.n));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(st.worker));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(st.partition.workers));
    put<double>(out, st.lb);
    auto blob = [&](const std::vector<Scalar>& v) {
        put<std::uint64_t>(out, v.size());
        out.write(reinterpret_cast<const char*>(v.data()),
                  static_cast<std::streamsize>(v.size() * sizeof(Scalar)));
    };
    blob(st.b);
    blob(st.c);
    blob(st.d);
    blob(st.e);
    if (!out) throw Error("checkpoint write failed: " + path);
}

}  // namespace

void write_checkpoint(const std::string& path, const CostState<float>& state) {
    write_impl(path, state);
}
void write_checkpoint(const std::string& path, const CostState<double>& state) {
    write_impl(path, state);
}

template <typename Scalar>
CostState<Scalar> read_checkpoint(const std::string& path, const Instance& inst) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open checkpoint: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) throw BadMagic("not a cost-state checkpoint");
    if (get<std::uint8_t>(in) != kVersion) throw VersionMismatch("unsupported checkpoint version");
    auto bits = get<std::uint8_t>(in);
    if (bits != CostState<Scalar>::precision_bits())
        throw VersionMismatch("checkpoint precision does not match requested Scalar width");
    int level = get<std::uint8_t>(in);
    (void)get<std::uint8_t>(in);
    int n = static_cast<int>(get<std::uint32_t>(in));
    int worker = static_cast<int>(get<std::uint32_t>(in));
    int workers = static_cast<int>(get<std::uint32_t>(in));
    if (n != inst.n) throw DimensionMismatch("checkpoint n does not match instance");
    auto partition = build_partition(n, workers);
    CostState<Scalar> st = init_costs<Scalar>(inst, level, partition, worker);
    st.lb = get<double>(in);
    auto blob = [&](std::vector<Scalar>& v) {
        auto count = get<std::uint64_t>(in);
        if (count != v.size()) throw TruncatedPayload("checkpoint block size mismatch");
        in.read(reinterpret_cast<char*>(v.data()),
                static_cast<std::streamsize>(count * sizeof(Scalar)));
        if (!in) throw TruncatedPayload("checkpoint truncated");
    };
    blob(st.b);
    blob(st.c);
    blob(st.d);
    blob(st.e);
    return st;
}

template CostState<float> read_checkpoint<float>(const std::string&, const Instance&);
template CostState<double> read_checkpoint<double>(const std::string&, const Instance&);

}  // namespace rltqap
