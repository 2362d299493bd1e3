"""entbound - Cotas certificadas de entrelazamiento geométrico (SDP + ascenso)"""
