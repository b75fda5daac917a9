#include "kronred/builtin_networks.hpp"

namespace kronred::builtin {

namespace {

std::vector<std::string> numbered(const std::string& prefix, int first, int last)
{
    std::vector<std::string> out;
    for (int i = first; i <= last; ++i) {
        out.push_back(prefix + std::to_string(i));
    }
    return out;
}

}  // namespace

CrnNetwork glycolysis()
{
    return CrnNetwork::single_species(numbered("x", 1, 3),
                                      {{0, 1, 7.19}, {1, 0, 41.11}, {1, 2, 32.53}, {2, 1, 5.69}},
                                      {{0, 0, 4.8}},
                                      {{2, 7.64}},
                                      {{2}});
}

CrnNetwork glycogen()
{
    Matrix Z = Matrix::Zero(6, 5);
    Z(0, 0) = 1;  // x1 + x5
    Z(4, 0) = 1;
    Z(1, 1) = 1;  // x2 + x6
    Z(5, 1) = 1;
    Z(1, 2) = 1;  // x2
    Z(2, 3) = 1;  // x3 + x5
    Z(4, 3) = 1;
    Z(3, 4) = 1;  // x4
    return CrnNetwork(numbered("x", 1, 6), Z,
                      {{0, 1, 7.64}, {1, 0, 6.0}, {1, 3, 2.4}, {3, 1, 19.11}, {2, 4, 772.67}, {4, 2, 242.62}},
                      {{2, 0, 0.01}},
                      {{4, 182.9}},
                      {{2}});
}

CrnNetwork asm1()
{
    return CrnNetwork::single_species(numbered("x", 1, 5),
                                      {{0, 1, 0.54},
                                       {1, 2, 0.67},
                                       {1, 3, 2.22},
                                       {2, 0, 0.37},
                                       {2, 1, 0.54},
                                       {3, 2, 0.19},
                                       {3, 4, 7.64},
                                       {4, 3, 1.19}},
                                      {{3, 0, 1.19}},
                                      {{1, 0.05}, {3, 0.01}},
                                      {{0, 2}});
}

CrnNetwork mckeithan()
{
    const double kf[20] = {52, 49, 41, 39, 37, 34, 31, 29, 25, 19, 16, 21, 20, 19, 18, 15, 24, 13, 7, 5};
    const double kr[20] = {13,  29,   0.16, 1.4,  2.3,  2,    0.19, 0.33, 0.94, 0.67,
                           0.31, 0.21, 3,    5,    1,    11,   0.8,  7,    1,    17};
    std::vector<Reaction> rx;
    for (Index i = 0; i < 20; ++i) {
        rx.push_back({i, i + 1, kf[i]});
        rx.push_back({i + 1, 0, kr[i]});
    }
    return CrnNetwork::single_species(numbered("x", 0, 20), std::move(rx), {{0, 0, 1.0}}, {{20, 10.0}}, {{20}});
}

std::vector<std::string> names()
{
    return {"glycolysis", "glycogen", "asm1", "mckeithan"};
}

CrnNetwork by_name(const std::string& name)
{
    if (name == "glycolysis") {
        return glycolysis();
    }
    if (name == "glycogen") {
        return glycogen();
    }
    if (name == "asm1") {
        return asm1();
    }
    if (name == "mckeithan") {
        return mckeithan();
    }
    throw InputError("unknown built-in network '" + name + "' (expected glycolysis, glycogen, asm1 or mckeithan)");
}

}  // namespace kronred::builtin
