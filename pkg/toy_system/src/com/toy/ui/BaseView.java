package com.toy.ui;

public abstract class BaseView implements View {
    public void refresh() {
        // repaint; nothing to do in the toy
    }
}
