#include "scnn/neuron.hpp"

namespace scnn {

NeuronParams NeuronParams::from_group(const NeuronGroupConfig &g)
{
    NeuronParams p;
    p.v_thresh = g.v_thresh.voltage().raw;
    p.v_reset = g.v_reset.voltage().raw;
    return p;
}

} // namespace scnn
